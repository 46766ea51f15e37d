// Oversmoothing threshold scatter: density at which the uniformity collapse
// first occurs vs graph order, one series per (depth, dropout). Orders whose
// search never fired are simply absent. Depth-1 points sit on a handful of
// density values, so that series gets deterministic x-jitter to stay legible.

import { ThresholdRow } from './csv.js'
import { groupBy } from './stats.js'
import { drawAxes, extent, PALETTE, Scale, SvgBuilder, trimNum } from './svg.js'

export function renderOversmooth(rows: ThresholdRow[]): { svg: string; plotted: number } {
  const present = rows.filter((r) => r.density !== null)
  const bySeries = groupBy(rows, (r) => `depth=${r.depth} dropout=${trimNum(r.dropout)}`)
  const seriesNames = [...bySeries.keys()].sort()

  const width = 560
  const height = 420
  const panel = { x0: 70, y0: 40, w: width - 100, h: height - 130 }
  const svg = new SvgBuilder(width, height)

  const xs = new Scale(
    extent(rows.map((r) => r.n)),
    [panel.x0, panel.x0 + panel.w],
  )
  const ys = new Scale(
    extent(present.length ? present.map((r) => r.density!) : [0, 1]),
    [panel.y0 + panel.h, panel.y0],
  )
  drawAxes(svg, panel, xs, ys, 'order n', 'collapse density', 'oversmoothing thresholds')

  let plotted = 0
  seriesNames.forEach((name, i) => {
    const c = PALETTE[i % PALETTE.length]
    const pts = bySeries.get(name)!.filter((r) => r.density !== null)
    pts.forEach((r, j) => {
      // jitter only depth-1 series; deterministic in the point index
      const jitter = r.depth === 1 ? ((j % 5) - 2) * 2.0 : 0
      svg.circle(xs.at(r.n) + jitter, ys.at(r.density!), 3.5, c)
      plotted += 1
    })
    const y = panel.y0 + panel.h + 46 + 16 * i
    svg.circle(24, y - 4, 3.5, c)
    svg.text(34, y, `${name} (${pts.length} points)`, 'font-size="11"')
  })
  return { svg: svg.render(), plotted }
}
