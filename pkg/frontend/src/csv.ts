import { readFileSync } from 'fs'

export type FigureKind = 'mix-scaling' | 'tv-bracket' | 'hydro-overlay' | 'tail-bounds'

export interface Table {
  header: string[]
  rows: number[][]
}

/** Documented CSV schema of the producing subcommand, per figure kind. */
export const SCHEMAS: Record<FigureKind, string[]> = {
  'mix-scaling': ['n', 'quantile', 'ci_lo', 'ci_hi', 'timeouts', 'violations'],
  'tv-bracket': ['t', 'lower', 'oracle', 'upper'],
  'hydro-overlay': ['block', 'u', 'empirical_mean', 'empirical_se', 'pde_value'],
  'tail-bounds': ['replica', 'theta'],
}

export function parseTable(text: string, expected: string[]): Table {
  const lines = text.trim().split(/\r?\n/).filter((ln) => ln.length > 0)
  if (lines.length === 0) throw new Error('empty input: no header line')
  const header = lines[0].split(',')
  if (header.length !== expected.length || header.some((h, i) => h !== expected[i])) {
    throw new Error(
      `schema mismatch: expected header ${expected.join(',')} but found ${header.join(',')}`
    )
  }
  const rows: number[][] = []
  for (const line of lines.slice(1)) {
    const cells = line.split(',')
    if (cells.length !== header.length) {
      throw new Error(`schema mismatch: row has ${cells.length} cells, header has ${header.length}`)
    }
    const row = cells.map(Number)
    if (row.some((v) => Number.isNaN(v))) {
      throw new Error(`non-numeric cell in row: ${line}`)
    }
    rows.push(row)
  }
  if (rows.length === 0) throw new Error('empty input: header but no data rows')
  return { header, rows }
}

export function readTable(path: string, expected: string[]): Table {
  return parseTable(readFileSync(path, 'utf8'), expected)
}

export function column(table: Table, name: string): number[] {
  const i = table.header.indexOf(name)
  if (i < 0) throw new Error(`no column named ${name}`)
  return table.rows.map((row) => row[i])
}
