import { readFileSync, writeFileSync } from 'fs'

import { FigureKind, SCHEMAS, Table, column, readTable } from './csv'
import { mixScanFit } from './fit'
import {
  HEIGHT,
  MARGIN,
  WIDTH,
  Scale,
  axes,
  circles,
  document,
  errorBars,
  extent,
  linearScale,
  logScale,
  polyline,
  text,
} from './svg'

export interface FigureStyle {
  title?: string
  /** slope of the reference line on the mix-scaling figure (1/kappa) */
  kappaRef?: number
  /** total walk time T behind a tail-bounds occupation sample */
  tTotal?: number
  /** tail exponent epsilon for the tail-bounds reference lines */
  eps?: number
}

export interface FigureSpec {
  kind: FigureKind
  /** main CSV first; mix-scaling optionally takes the manifest JSON second */
  inputs: string[]
  out: string
  style?: FigureStyle
}

const PLOT_X: [number, number] = [MARGIN.left, WIDTH - MARGIN.right]
const PLOT_Y: [number, number] = [HEIGHT - MARGIN.bottom, MARGIN.top]

export function renderMixScaling(table: Table, style: FigureStyle = {}): string {
  const x = column(table, 'n').map(Math.log)
  const y = column(table, 'quantile')
  const lo = column(table, 'ci_lo')
  const hi = column(table, 'ci_hi')
  const fit = mixScanFit(table)
  const sx = linearScale(extent(x), PLOT_X)
  const sy = linearScale(extent([...lo, ...hi, 0]), PLOT_Y)
  const parts: string[] = []
  parts.push(axes(sx, sy, 'log n', 'coalescence quantile'))
  parts.push(errorBars(x.map(sx), lo.map(sy), hi.map(sy), '#444'))
  parts.push(circles(x.map(sx), y.map(sy), '#1f77b4'))
  const xs = [Math.min(...x), Math.max(...x)]
  parts.push(
    polyline(xs.map(sx), xs.map((v) => sy(fit.slope * v + fit.intercept)), '#1f77b4')
  )
  if (style.kappaRef !== undefined) {
    const b = y[0] - style.kappaRef * x[0]
    parts.push(polyline(xs.map(sx), xs.map((v) => sy(style.kappaRef! * v + b)), '#888', '6,4'))
    parts.push(text(WIDTH - 200, MARGIN.top + 34, `1/kappa ref slope=${style.kappaRef}`))
  }
  parts.push(text(WIDTH - 200, MARGIN.top + 16, `fitted slope=${fit.slope.toFixed(6)}`))
  return document(style.title ?? 'mixing-time scaling', parts.join('\n'),
    `data-slope="${fit.slope}"`)
}

export function renderTvBracket(table: Table, style: FigureStyle = {}): string {
  const t = column(table, 't')
  const lower = column(table, 'lower')
  const oracle = column(table, 'oracle')
  const upper = column(table, 'upper')
  const sx = linearScale(extent(t), PLOT_X)
  const sy = linearScale([0, 1.05], PLOT_Y)
  const parts: string[] = []
  parts.push(axes(sx, sy, 't', 'distance to stationarity'))
  parts.push(polyline(t.map(sx), upper.map(sy), '#d62728'))
  parts.push(polyline(t.map(sx), oracle.map(sy), '#000000'))
  parts.push(polyline(t.map(sx), lower.map(sy), '#1f77b4', '4,3'))
  parts.push(text(WIDTH - 220, MARGIN.top + 16, 'coupling upper bound', 'fill="#d62728"'))
  parts.push(text(WIDTH - 220, MARGIN.top + 32, 'exact total variation', 'fill="#000000"'))
  parts.push(text(WIDTH - 220, MARGIN.top + 48, 'witness lower bound', 'fill="#1f77b4"'))
  return document(style.title ?? 'total-variation bracket', parts.join('\n'))
}

export function renderHydroOverlay(table: Table, style: FigureStyle = {}): string {
  const u = column(table, 'u')
  const mean = column(table, 'empirical_mean')
  const se = column(table, 'empirical_se')
  const pde = column(table, 'pde_value')
  if (se.every((s) => s === 0)) {
    throw new Error('degenerate input: every standard error is zero (no replicas behind the means)')
  }
  if (se.some((s) => !Number.isFinite(s) || s < 0)) {
    throw new Error('degenerate input: standard errors must be finite and nonnegative')
  }
  const lo = mean.map((m, i) => m - 1.96 * se[i])
  const hi = mean.map((m, i) => m + 1.96 * se[i])
  const sx = linearScale(extent(u), PLOT_X)
  const sy = linearScale(extent([...lo, ...hi, ...pde]), PLOT_Y)
  const parts: string[] = []
  parts.push(axes(sx, sy, 'u', 'density'))
  parts.push(polyline(u.map(sx), pde.map(sy), '#000000'))
  parts.push(errorBars(u.map(sx), lo.map(sy), hi.map(sy), '#1f77b4'))
  parts.push(circles(u.map(sx), mean.map(sy), '#1f77b4'))
  parts.push(text(WIDTH - 220, MARGIN.top + 16, 'limit equation', 'fill="#000000"'))
  parts.push(text(WIDTH - 220, MARGIN.top + 32, 'block means (95% bars)', 'fill="#1f77b4"'))
  return document(style.title ?? 'hydrodynamic profile overlay', parts.join('\n'))
}

export function renderTailBounds(table: Table, style: FigureStyle = {}): string {
  const theta = [...column(table, 'theta')].sort((a, b) => a - b)
  const n = theta.length
  const tTotal = style.tTotal ?? 400
  const eps = style.eps ?? 0.1
  const threshold = 2 * tTotal ** (0.5 + 2 * eps)
  const bound = Math.min(1, Math.exp(-(tTotal ** (eps / 4))))
  const floor = 1 / (2 * n)
  // survival function S(x) = P(theta > x), clamped to the resolution floor
  const xs: number[] = []
  const ys: number[] = []
  for (let i = 0; i < n; i++) {
    xs.push(theta[i])
    ys.push(Math.max((n - i - 1) / n, floor))
  }
  const xHi = Math.max(theta[n - 1], threshold) * 1.05
  const sx = linearScale([0, xHi], PLOT_X)
  const sy = logScale([floor, 1], PLOT_Y)
  const parts: string[] = []
  parts.push(axes(sx, sy, 'occupation time theta', 'tail frequency', { logY: true }))
  parts.push(polyline(xs.map(sx), ys.map(sy), '#1f77b4'))
  const py = sy(Math.max(bound, floor))
  parts.push(polyline([sx(0), sx(xHi)], [py, py], '#d62728', '6,4'))
  parts.push(polyline([sx(threshold), sx(threshold)], [PLOT_Y[0], PLOT_Y[1]], '#888', '6,4'))
  parts.push(text(sx(threshold) + 6, MARGIN.top + 16, `threshold 2T^(1/2+2e)=${threshold.toFixed(1)}`))
  parts.push(text(MARGIN.left + 10, py - 6, `bound exp(-T^(e/4))=${bound.toFixed(3)}`, 'fill="#d62728"'))
  return document(style.title ?? 'occupation-time tail conformance', parts.join('\n'))
}

const RENDERERS: Record<FigureKind, (table: Table, style: FigureStyle) => string> = {
  'mix-scaling': renderMixScaling,
  'tv-bracket': renderTvBracket,
  'hydro-overlay': renderHydroOverlay,
  'tail-bounds': renderTailBounds,
}

/** Render one figure from its CSV input(s) and write the SVG; returns the SVG text. */
export function render(spec: FigureSpec): string {
  if (!(spec.kind in RENDERERS)) throw new Error(`unknown figure kind: ${spec.kind}`)
  if (spec.inputs.length === 0) throw new Error('no input files given')
  const table = readTable(spec.inputs[0], SCHEMAS[spec.kind])
  const style: FigureStyle = { ...spec.style }
  if (spec.kind === 'mix-scaling' && spec.inputs.length > 1) {
    const manifest = JSON.parse(readFileSync(spec.inputs[1], 'utf8'))
    const fit = mixScanFit(table)
    if (typeof manifest.slope === 'number' && Math.abs(manifest.slope - fit.slope) > 1e-6) {
      throw new Error(
        `slope recomputed from the CSV (${fit.slope}) does not match the manifest (${manifest.slope})`
      )
    }
    if (style.kappaRef === undefined && typeof manifest.kappa_ref === 'number') {
      style.kappaRef = manifest.kappa_ref
    }
  }
  const svg = RENDERERS[spec.kind](table, style)
  writeFileSync(spec.out, svg)
  return svg
}
