// Minimal SVG assembly: figures are plain strings so outputs stay diffable.

export interface Extent {
  min: number
  max: number
}

export function extent(values: number[], pad = 0.05): Extent {
  let min = Math.min(...values)
  let max = Math.max(...values)
  if (min === max) {
    min -= 1
    max += 1
  }
  const span = max - min
  return { min: min - pad * span, max: max + pad * span }
}

export class Scale {
  constructor(
    private domain: Extent,
    private range: [number, number],
  ) {}

  at(x: number): number {
    const t = (x - this.domain.min) / (this.domain.max - this.domain.min)
    return this.range[0] + t * (this.range[1] - this.range[0])
  }

  ticks(count = 5): number[] {
    const span = this.domain.max - this.domain.min
    const step = niceStep(span / count)
    const start = Math.ceil(this.domain.min / step) * step
    const out: number[] = []
    for (let v = start; v <= this.domain.max + 1e-9; v += step) {
      out.push(Number(v.toFixed(10)))
    }
    return out
  }
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)))
  const norm = raw / mag
  if (norm < 1.5) return mag
  if (norm < 3.5) return 2 * mag
  if (norm < 7.5) return 5 * mag
  return 10 * mag
}

export const PALETTE = ['#d95f02', '#7570b3', '#e7298a', '#1b9e77', '#66a61e', '#e6ab02']

const esc = (s: string) => s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')

export class SvgBuilder {
  private parts: string[] = []

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, opts: string = ''): void {
    this.parts.push(
      `<line x1="${f(x1)}" y1="${f(y1)}" x2="${f(x2)}" y2="${f(y2)}" stroke="${stroke}" ${opts}/>`,
    )
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${f(cx)}" cy="${f(cy)}" r="${f(r)}" fill="${fill}"/>`)
  }

  polyline(points: Array<[number, number]>, stroke: string, opts: string = ''): void {
    const pts = points.map(([x, y]) => `${f(x)},${f(y)}`).join(' ')
    this.parts.push(`<polyline points="${pts}" fill="none" stroke="${stroke}" ${opts}/>`)
  }

  text(x: number, y: number, content: string, opts: string = ''): void {
    this.parts.push(`<text x="${f(x)}" y="${f(y)}" font-family="sans-serif" ${opts}>${esc(content)}</text>`)
  }

  raw(fragment: string): void {
    this.parts.push(fragment)
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">`,
      `<rect width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      '</svg>',
    ].join('\n')
  }
}

const f = (x: number) => (Number.isInteger(x) ? String(x) : x.toFixed(2))

export interface Panel {
  x0: number
  y0: number
  w: number
  h: number
}

export function drawAxes(
  svg: SvgBuilder,
  panel: Panel,
  xs: Scale,
  ys: Scale,
  xlabel: string,
  ylabel: string,
  title: string,
): void {
  const { x0, y0, w, h } = panel
  svg.line(x0, y0 + h, x0 + w, y0 + h, '#333')
  svg.line(x0, y0, x0, y0 + h, '#333')
  for (const t of xs.ticks()) {
    const px = xs.at(t)
    svg.line(px, y0 + h, px, y0 + h + 4, '#333')
    svg.text(px, y0 + h + 16, trimNum(t), 'font-size="10" text-anchor="middle"')
  }
  for (const t of ys.ticks()) {
    const py = ys.at(t)
    svg.line(x0 - 4, py, x0, py, '#333')
    svg.text(x0 - 6, py + 3, trimNum(t), 'font-size="10" text-anchor="end"')
  }
  svg.text(x0 + w / 2, y0 + h + 30, xlabel, 'font-size="11" text-anchor="middle"')
  svg.text(x0 - 34, y0 + h / 2, ylabel, `font-size="11" text-anchor="middle" transform="rotate(-90 ${x0 - 34} ${y0 + h / 2})"`)
  svg.text(x0 + w / 2, y0 - 8, title, 'font-size="12" text-anchor="middle" font-weight="bold"')
}

export function trimNum(x: number): string {
  return Number.isInteger(x) ? String(x) : String(Number(x.toFixed(4)))
}
