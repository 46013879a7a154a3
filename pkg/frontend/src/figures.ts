/** Figure models extracted from the bench CSVs.
 *
 * Two kinds (matching the two bench views worth plotting):
 *
 * - ratio_scatter: one marker per (size, start) wall-time ratio DCA/BDCA
 *   from a runs CSV, plus the per-size median;
 * - convergence_trace: objective gap phi(x_k) - phi* per algorithm from
 *   per-iteration trace CSVs, with the accepted BDCA step sizes.
 */

import * as path from 'node:path';

import { columnIndex, CsvError, CsvTable, numberCell } from './csv.js';

export interface RatioPoint {
  n: number;
  start: number;
  ratio: number;
}

export interface RatioFigure {
  kind: 'ratio_scatter';
  points: RatioPoint[];
  medians: { n: number; ratio: number }[];
}

export interface TraceSeries {
  name: string;
  ks: number[];
  gaps: number[];
}

export interface TraceFigure {
  kind: 'convergence_trace';
  series: TraceSeries[];
  lambda: { name: string; ks: number[]; values: number[] };
  phiStar: number;
}

export function median(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  const mid = Math.floor(sorted.length / 2);
  return sorted.length % 2 === 1
    ? sorted[mid]
    : 0.5 * (sorted[mid - 1] + sorted[mid]);
}

/** Pair the dca/bdca rows of a runs CSV into per-start time ratios. */
export function buildRatioFigure(runs: CsvTable): RatioFigure {
  const nCol = columnIndex(runs, 'n');
  const startCol = columnIndex(runs, 'start');
  const algCol = columnIndex(runs, 'algorithm');
  const wallCol = columnIndex(runs, 'wall_time_s');

  const walls = new Map<string, { n: number; start: number;
                                  dca?: number; bdca?: number }>();
  for (let i = 0; i < runs.rows.length; i++) {
    const n = numberCell(runs, i, nCol);
    const start = numberCell(runs, i, startCol);
    const wall = numberCell(runs, i, wallCol);
    const alg = runs.rows[i][algCol].trim();
    if (n === null || start === null) {
      throw new CsvError('size and start must be present', runs.file, i + 2);
    }
    if (wall === null) {
      continue; // errored run; its pair is dropped
    }
    const key = `${n}:${start}`;
    const entry = walls.get(key) ?? { n, start };
    if (alg === 'dca') {
      entry.dca = wall;
    } else if (alg === 'bdca') {
      entry.bdca = wall;
    }
    walls.set(key, entry);
  }

  const points: RatioPoint[] = [];
  for (const entry of walls.values()) {
    if (entry.dca !== undefined && entry.bdca !== undefined && entry.bdca > 0) {
      points.push({ n: entry.n, start: entry.start,
                    ratio: entry.dca / entry.bdca });
    }
  }
  points.sort((a, b) => a.n - b.n || a.start - b.start);
  if (points.length === 0) {
    throw new CsvError('no paired dca/bdca rows to plot', runs.file, 1);
  }

  const sizes = [...new Set(points.map((p) => p.n))].sort((a, b) => a - b);
  const medians = sizes.map((n) => ({
    n,
    ratio: median(points.filter((p) => p.n === n).map((p) => p.ratio)),
  }));
  return { kind: 'ratio_scatter', points, medians };
}

function seriesName(file: string): string {
  const base = path.basename(file).toLowerCase();
  if (base.includes('bdca')) {
    return 'bdca';
  }
  if (base.includes('dca')) {
    return 'dca';
  }
  return path.basename(file).replace(/\.csv$/i, '');
}

/** Objective-gap series for each trace, sharing one reference value phi*.
 *
 * phi* is the smallest objective value either algorithm reached on this
 * instance; gaps at or below the floor (the minimizing tail itself) are
 * dropped from the log-scale series rather than clamped.
 */
export function buildTraceFigure(traces: CsvTable[]): TraceFigure {
  if (traces.length === 0) {
    throw new Error('at least one trace CSV is required');
  }
  const parsed = traces.map((table) => {
    const kCol = columnIndex(table, 'k');
    const phiXCol = columnIndex(table, 'phi_x');
    const phiYCol = columnIndex(table, 'phi_y');
    const lambdaCol = columnIndex(table, 'lambda_k');
    const ks: number[] = [];
    const phis: number[] = [];
    const lambdas: number[] = [];
    let terminal = Infinity;
    for (let i = 0; i < table.rows.length; i++) {
      const k = numberCell(table, i, kCol);
      const phiX = numberCell(table, i, phiXCol);
      const phiY = numberCell(table, i, phiYCol);
      const lambda = numberCell(table, i, lambdaCol);
      if (k === null || phiX === null || phiY === null || lambda === null) {
        throw new CsvError('trace cells must be present', table.file, i + 2);
      }
      ks.push(k);
      phis.push(phiX);
      lambdas.push(lambda);
      terminal = Math.min(terminal, phiY);
    }
    return { name: seriesName(table.file), ks, phis, lambdas, terminal };
  });

  const phiStar = Math.min(...parsed.map((t) => t.terminal));
  const series: TraceSeries[] = parsed.map((t) => {
    const ks: number[] = [];
    const gaps: number[] = [];
    for (let i = 0; i < t.ks.length; i++) {
      const gap = t.phis[i] - phiStar;
      if (gap > 0) {
        ks.push(t.ks[i]);
        gaps.push(gap);
      }
    }
    return { name: t.name, ks, gaps };
  });
  if (series.every((s) => s.gaps.length === 0)) {
    throw new CsvError('all objective gaps are zero; nothing to plot on a '
                       + 'log axis', traces[0].file, 1);
  }

  // Step sizes come from the boosted trace (the one that accepted any
  // positive step); with none, fall back to the last input.
  const boosted = parsed.find((t) => t.lambdas.some((v) => v > 0))
    ?? parsed[parsed.length - 1];
  return {
    kind: 'convergence_trace',
    series,
    lambda: { name: boosted.name, ks: boosted.ks, values: boosted.lambdas },
    phiStar,
  };
}
