import { Table, column } from './csv'

export interface WlsFit {
  slope: number
  intercept: number
  slopeSe: number
}

/**
 * Weighted least-squares affine fit with weights 1/se^2, accumulated in row
 * order so the result reproduces the experiment pipeline's fit bit-for-bit
 * on the same inputs.
 */
export function wlsFit(x: number[], y: number[], se: number[]): WlsFit {
  if (x.length < 3) throw new Error('fit needs at least 3 points')
  const w = se.map((s) => 1.0 / Math.max(s, 1e-12) ** 2)
  const W = w.reduce((a, b) => a + b, 0)
  let xbar = 0
  let ybar = 0
  for (let i = 0; i < x.length; i++) {
    xbar += w[i] * x[i]
    ybar += w[i] * y[i]
  }
  xbar /= W
  ybar /= W
  let sxx = 0
  let sxy = 0
  for (let i = 0; i < x.length; i++) {
    sxx += w[i] * (x[i] - xbar) ** 2
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar)
  }
  const slope = sxy / sxx
  return { slope, intercept: ybar - slope * xbar, slopeSe: 1.0 / Math.sqrt(sxx) }
}

/**
 * Recompute the quantile-vs-log-n slope from a mix-scan CSV, using the same
 * per-point standard errors (half the normal CI width, floored at 1e-6) as
 * the producer.
 */
export function mixScanFit(table: Table): WlsFit {
  const x = column(table, 'n').map(Math.log)
  const y = column(table, 'quantile')
  const lo = column(table, 'ci_lo')
  const hi = column(table, 'ci_hi')
  const se = lo.map((l, i) => Math.max((hi[i] - l) / (2 * 1.96), 1e-6))
  return wlsFit(x, y, se)
}
