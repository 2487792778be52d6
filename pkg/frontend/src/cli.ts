#!/usr/bin/env node
/**
 * plot <kind> --in data.csv[,manifest.json] --out figure.svg
 *               [--kappa-ref 2] [--t-total 400] [--eps 0.1] [--title "..."]
 *
 * kinds: mix-scaling | tv-bracket | hydro-overlay | tail-bounds
 */

import { FigureKind, SCHEMAS } from './csv'
import { FigureSpec, FigureStyle, render } from './figures'

function parseArgs(argv: string[]): FigureSpec {
  const kind = argv[0] as FigureKind
  if (!kind || !(kind in SCHEMAS)) {
    throw new Error(`usage: plot <${Object.keys(SCHEMAS).join('|')}> --in CSV --out SVG`)
  }
  let inputs: string[] = []
  let out = ''
  const style: FigureStyle = {}
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i]
    const value = argv[i + 1]
    if (value === undefined) throw new Error(`missing value for ${flag}`)
    if (flag === '--in') inputs = value.split(',')
    else if (flag === '--out') out = value
    else if (flag === '--kappa-ref') style.kappaRef = Number(value)
    else if (flag === '--t-total') style.tTotal = Number(value)
    else if (flag === '--eps') style.eps = Number(value)
    else if (flag === '--title') style.title = value
    else throw new Error(`unknown flag ${flag}`)
  }
  if (inputs.length === 0 || !out) throw new Error('--in and --out are required')
  return { kind, inputs, out, style }
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv)
    render(spec)
    console.log(`wrote ${spec.out}`)
    return 0
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err))
    return 1
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)))
}
