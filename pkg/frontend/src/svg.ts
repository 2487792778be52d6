/** Minimal deterministic SVG plotting: fixed canvas, linear or log scales. */

export const WIDTH = 640
export const HEIGHT = 420
export const MARGIN = { left: 64, right: 20, top: 36, bottom: 48 }

export interface Scale {
  (v: number): number
  domain: [number, number]
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain
  const [r0, r1] = range
  const span = d1 - d0 || 1
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale
  fn.domain = domain
  return fn
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const inner = linearScale([Math.log10(domain[0]), Math.log10(domain[1])], range)
  const fn = ((v: number) => inner(Math.log10(v))) as Scale
  fn.domain = domain
  return fn
}

export function extent(values: number[], pad = 0.05): [number, number] {
  const lo = Math.min(...values)
  const hi = Math.max(...values)
  const span = hi - lo || Math.abs(hi) || 1
  return [lo - pad * span, hi + pad * span]
}

export function fmt(v: number): string {
  if (v === 0) return '0'
  const a = Math.abs(v)
  if (a >= 1e4 || a < 1e-3) return v.toExponential(2)
  return Number(v.toPrecision(5)).toString()
}

export function ticks(domain: [number, number], count = 6): number[] {
  const [lo, hi] = domain
  const step = (hi - lo) / (count - 1)
  const out: number[] = []
  for (let i = 0; i < count; i++) out.push(lo + i * step)
  return out
}

export function polyline(xs: number[], ys: number[], stroke: string, dash = ''): string {
  const pts = xs.map((x, i) => `${x.toFixed(2)},${ys[i].toFixed(2)}`).join(' ')
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : ''
  return `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="1.5"${dashAttr}/>`
}

export function circles(xs: number[], ys: number[], fill: string, r = 3): string {
  return xs
    .map((x, i) => `<circle cx="${x.toFixed(2)}" cy="${ys[i].toFixed(2)}" r="${r}" fill="${fill}"/>`)
    .join('\n')
}

export function errorBars(xs: number[], yLo: number[], yHi: number[], stroke: string): string {
  return xs
    .map(
      (x, i) =>
        `<line x1="${x.toFixed(2)}" y1="${yLo[i].toFixed(2)}" x2="${x.toFixed(2)}" ` +
        `y2="${yHi[i].toFixed(2)}" stroke="${stroke}" stroke-width="1"/>`
    )
    .join('\n')
}

export function text(x: number, y: number, s: string, opts = ''): string {
  return `<text x="${x.toFixed(2)}" y="${y.toFixed(2)}" font-family="monospace" font-size="12"${opts ? ' ' + opts : ''}>${s}</text>`
}

export function axes(
  sx: Scale,
  sy: Scale,
  xLabel: string,
  yLabel: string,
  opts: { logY?: boolean } = {}
): string {
  const x0 = MARGIN.left
  const x1 = WIDTH - MARGIN.right
  const y0 = HEIGHT - MARGIN.bottom
  const y1 = MARGIN.top
  const parts: string[] = []
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`)
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`)
  for (const t of ticks(sx.domain)) {
    const px = sx(t)
    parts.push(`<line x1="${px.toFixed(2)}" y1="${y0}" x2="${px.toFixed(2)}" y2="${y0 + 5}" stroke="black"/>`)
    parts.push(text(px - 14, y0 + 18, fmt(t)))
  }
  const yTicks = opts.logY
    ? logTicks(sy.domain)
    : ticks(sy.domain)
  for (const t of yTicks) {
    const py = sy(t)
    parts.push(`<line x1="${x0 - 5}" y1="${py.toFixed(2)}" x2="${x0}" y2="${py.toFixed(2)}" stroke="black"/>`)
    parts.push(text(8, py + 4, fmt(t)))
  }
  parts.push(text((x0 + x1) / 2 - 30, HEIGHT - 10, xLabel))
  parts.push(text(10, 20, yLabel))
  return parts.join('\n')
}

function logTicks(domain: [number, number]): number[] {
  const lo = Math.ceil(Math.log10(domain[0]))
  const hi = Math.floor(Math.log10(domain[1]))
  const out: number[] = []
  for (let e = lo; e <= hi; e++) out.push(10 ** e)
  return out.length >= 2 ? out : ticks(domain)
}

export function document(title: string, body: string, extraAttrs = ''): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}"${extraAttrs ? ' ' + extraAttrs : ''}>\n` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n` +
    text(MARGIN.left, 20, title, 'font-size="14"') +
    '\n' +
    body +
    '\n</svg>\n'
  )
}
