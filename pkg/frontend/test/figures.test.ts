import { mkdtempSync, readFileSync } from 'fs'
import { tmpdir } from 'os'
import { join } from 'path'
import { describe, expect, it } from 'vitest'

import { SCHEMAS, parseTable, readTable } from '../src/csv'
import { mixScanFit } from '../src/fit'
import { render, renderHydroOverlay } from '../src/figures'

const DATA = join(__dirname, '..', 'sample-data')
const outDir = mkdtempSync(join(tmpdir(), 'figs-'))

describe('schema validation', () => {
  it('refuses a mismatched header', () => {
    expect(() => parseTable('a,b\n1,2\n', SCHEMAS['tv-bracket'])).toThrow(/schema mismatch/)
  })

  it('refuses empty input', () => {
    expect(() => parseTable('', SCHEMAS['tv-bracket'])).toThrow(/empty input/)
    expect(() => parseTable('t,lower,oracle,upper\n', SCHEMAS['tv-bracket'])).toThrow(
      /no data rows/
    )
  })

  it('refuses non-numeric cells', () => {
    expect(() => parseTable('t,lower,oracle,upper\n0.1,x,0.2,0.3\n', SCHEMAS['tv-bracket'])).toThrow(
      /non-numeric/
    )
  })
})

describe('all four figure kinds render from the shipped samples', () => {
  const cases: Array<[string, string[]]> = [
    ['mix-scaling', ['mix_scan.csv', 'mix_scan_manifest.json']],
    ['tv-bracket', ['tv_bracket.csv']],
    ['hydro-overlay', ['hydro.csv']],
    ['tail-bounds', ['occupation.csv']],
  ]
  for (const [kind, files] of cases) {
    it(`renders ${kind}`, () => {
      const out = join(outDir, `${kind}.svg`)
      const svg = render({
        kind: kind as any,
        inputs: files.map((f) => join(DATA, f)),
        out,
      })
      expect(svg.startsWith('<svg')).toBe(true)
      expect(readFileSync(out, 'utf8')).toBe(svg)
    })
  }

  it('re-rendering identical inputs is byte-identical', () => {
    const spec = {
      kind: 'tv-bracket' as const,
      inputs: [join(DATA, 'tv_bracket.csv')],
      out: join(outDir, 'again.svg'),
    }
    expect(render(spec)).toBe(render(spec))
  })
})

describe('mix-scaling slope annotation', () => {
  it('matches the experiment manifest to 1e-6', () => {
    const table = readTable(join(DATA, 'mix_scan.csv'), SCHEMAS['mix-scaling'])
    const manifest = JSON.parse(readFileSync(join(DATA, 'mix_scan_manifest.json'), 'utf8'))
    const fit = mixScanFit(table)
    expect(Math.abs(fit.slope - manifest.slope)).toBeLessThanOrEqual(1e-6)
    const svg = render({
      kind: 'mix-scaling',
      inputs: [join(DATA, 'mix_scan.csv'), join(DATA, 'mix_scan_manifest.json')],
      out: join(outDir, 'slope.svg'),
    })
    const m = svg.match(/data-slope="([^"]+)"/)
    expect(m).not.toBeNull()
    expect(Math.abs(Number(m![1]) - manifest.slope)).toBeLessThanOrEqual(1e-6)
  })
})

describe('tv-bracket ordering', () => {
  it('shows lower <= oracle <= upper at every plotted time', () => {
    const table = readTable(join(DATA, 'tv_bracket.csv'), SCHEMAS['tv-bracket'])
    const idx = Object.fromEntries(table.header.map((h, i) => [h, i]))
    for (const row of table.rows) {
      expect(row[idx.lower]).toBeLessThanOrEqual(row[idx.oracle] + 1e-12)
      expect(row[idx.oracle]).toBeLessThanOrEqual(row[idx.upper] + 1e-12)
    }
  })
})

describe('degenerate hydro input', () => {
  it('errors instead of drawing an empty plot', () => {
    const table = parseTable(
      'block,u,empirical_mean,empirical_se,pde_value\n0,0.1,0.0,0.0,0.0\n1,0.3,0.0,0.0,0.0\n',
      SCHEMAS['hydro-overlay']
    )
    expect(() => renderHydroOverlay(table)).toThrow(/degenerate input/)
  })
})
