#!/usr/bin/env node
// plot <loss-curves|oversmooth> --csv <path> --out <path>
// Exit codes: 0 success, 2 usage or input error.

import { writeFileSync } from 'fs'
import { CsvError, readThresholdCsv, readTrialCsv } from './csv.js'
import { renderLossCurves } from './lossCurves.js'
import { renderOversmooth } from './oversmooth.js'

function parseArgs(argv: string[]): { kind: string; csv: string; out: string } {
  const [kind, ...rest] = argv
  const flags = new Map<string, string>()
  for (let i = 0; i < rest.length; i += 2) {
    if (!rest[i].startsWith('--') || rest[i + 1] === undefined) {
      throw new Error(`bad argument ${rest[i]}`)
    }
    flags.set(rest[i].slice(2), rest[i + 1])
  }
  const csv = flags.get('csv')
  const out = flags.get('out')
  if (!kind || !csv || !out) {
    throw new Error('usage: plot <loss-curves|oversmooth> --csv <path> --out <path>')
  }
  return { kind, csv, out }
}

export function main(argv: string[]): number {
  let args
  try {
    args = parseArgs(argv)
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err))
    return 2
  }
  try {
    if (args.kind === 'loss-curves') {
      const rows = readTrialCsv(args.csv)
      writeFileSync(args.out, renderLossCurves(rows))
    } else if (args.kind === 'oversmooth') {
      const rows = readThresholdCsv(args.csv)
      const { svg, plotted } = renderOversmooth(rows)
      writeFileSync(args.out, svg)
      if (plotted === 0) {
        console.error('warning: no thresholds present; axes rendered empty')
      }
    } else {
      console.error(`unknown figure kind "${args.kind}"`)
      return 2
    }
  } catch (err) {
    if (err instanceof CsvError || err instanceof Error) {
      console.error(err.message)
      return 2
    }
    throw err
  }
  console.log(`wrote ${args.out}`)
  return 0
}

const entry = process.argv[1] ?? ''
if (entry.endsWith('cli.js') || entry.endsWith('plot')) {
  process.exit(main(process.argv.slice(2)))
}
