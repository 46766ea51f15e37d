// Readers for the experiment harness CSV formats. The trial schema is fixed:
// algo,family,n,d,k,trial,seed,loss,proper,ms — one row per solver run.

import { readFileSync } from 'fs'

export interface TrialRow {
  algo: string
  family: string
  n: number
  d: number
  k: number
  trial: number
  seed: number
  loss: number
  proper: boolean
  ms: number
}

export interface ThresholdRow {
  n: number
  depth: number
  dropout: number
  density: number | null // null when the collapse never occurred
}

export const TRIAL_COLUMNS = ['algo', 'family', 'n', 'd', 'k', 'trial', 'seed', 'loss', 'proper', 'ms']
export const THRESHOLD_COLUMNS = ['n', 'depth', 'dropout', 'density']

export class CsvError extends Error {}

function splitNonEmptyLines(text: string): string[] {
  return text.split(/\r?\n/).filter((line) => line.trim().length > 0)
}

function checkHeader(header: string, expected: string[], path: string): void {
  const got = header.split(',').map((c) => c.trim())
  for (const col of expected) {
    if (!got.includes(col)) {
      throw new CsvError(`${path}: missing column "${col}" (header: ${header})`)
    }
  }
}

export function readTrialCsv(path: string): TrialRow[] {
  const lines = splitNonEmptyLines(readFileSync(path, 'utf8'))
  if (lines.length === 0) throw new CsvError(`${path}: empty CSV`)
  checkHeader(lines[0], TRIAL_COLUMNS, path)
  const index = lines[0].split(',').map((c) => c.trim())
  const at = (cells: string[], name: string) => cells[index.indexOf(name)]
  const rows: TrialRow[] = []
  for (const line of lines.slice(1)) {
    const cells = line.split(',')
    rows.push({
      algo: at(cells, 'algo'),
      family: at(cells, 'family'),
      n: Number(at(cells, 'n')),
      d: Number(at(cells, 'd')),
      k: Number(at(cells, 'k')),
      trial: Number(at(cells, 'trial')),
      seed: Number(at(cells, 'seed')),
      loss: Number(at(cells, 'loss')),
      proper: at(cells, 'proper') === 'true',
      ms: Number(at(cells, 'ms')),
    })
  }
  if (rows.length === 0) throw new CsvError(`${path}: no data rows`)
  return rows
}

export function readThresholdCsv(path: string): ThresholdRow[] {
  const lines = splitNonEmptyLines(readFileSync(path, 'utf8'))
  if (lines.length === 0) throw new CsvError(`${path}: empty CSV`)
  checkHeader(lines[0], THRESHOLD_COLUMNS, path)
  const index = lines[0].split(',').map((c) => c.trim())
  const at = (cells: string[], name: string) => cells[index.indexOf(name)]
  const rows: ThresholdRow[] = []
  for (const line of lines.slice(1)) {
    const cells = line.split(',')
    const raw = at(cells, 'density').trim()
    rows.push({
      n: Number(at(cells, 'n')),
      depth: Number(at(cells, 'depth')),
      dropout: Number(at(cells, 'dropout')),
      density: raw === '' || raw === 'none' ? null : Number(raw),
    })
  }
  if (rows.length === 0) throw new CsvError(`${path}: no data rows`)
  return rows
}
