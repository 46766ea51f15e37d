// The same statistics the harness computes: normal-approximation 95%
// intervals (z = 1.96, Bessel-corrected sd) and ordinary least squares.
// Plots must never disagree with the tables, so these are kept formula-
// identical and cross-checked against harness output in the tests.

export function meanHalfwidth(xs: number[]): { mean: number; halfwidth: number } {
  if (xs.length < 2) throw new Error('need at least 2 samples')
  const mean = xs.reduce((a, b) => a + b, 0) / xs.length
  const ss = xs.reduce((a, b) => a + (b - mean) * (b - mean), 0)
  const sd = Math.sqrt(ss / (xs.length - 1))
  return { mean, halfwidth: (1.96 * sd) / Math.sqrt(xs.length) }
}

export function olsFit(points: Array<[number, number]>): { slope: number; intercept: number } {
  if (points.length < 2) throw new Error('need at least 2 points')
  const xbar = points.reduce((a, [x]) => a + x, 0) / points.length
  const ybar = points.reduce((a, [, y]) => a + y, 0) / points.length
  let sxx = 0
  let sxy = 0
  for (const [x, y] of points) {
    sxx += (x - xbar) * (x - xbar)
    sxy += (x - xbar) * (y - ybar)
  }
  if (sxx === 0) throw new Error('all n values equal; line is degenerate')
  const slope = sxy / sxx
  return { slope, intercept: ybar - slope * xbar }
}

export function groupBy<T, K extends string | number>(rows: T[], key: (row: T) => K): Map<K, T[]> {
  const out = new Map<K, T[]>()
  for (const row of rows) {
    const k = key(row)
    const bucket = out.get(k)
    if (bucket) bucket.push(row)
    else out.set(k, [row])
  }
  return out
}
