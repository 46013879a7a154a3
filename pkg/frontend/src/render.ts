#!/usr/bin/env node
/** Figure rendering CLI.
 *
 *   render --kind ratio --in runs_horn_copositive.csv --out fig1.svg
 *   render --kind trace --in trace_..._dca.csv trace_..._bdca.csv --out fig2.svg
 *
 * Exit codes: 0 rendered, 1 missing/malformed CSV (message carries the
 * offending file:line), 2 usage or unsupported output format.
 */

import * as fs from 'node:fs';
import * as path from 'node:path';

import { CsvError, parseCsvFile } from './csv.js';
import { buildRatioFigure, buildTraceFigure } from './figures.js';
import { Labels, renderRatioSvg, renderTraceSvg } from './svg.js';

export interface FigureSpec {
  kind: 'ratio_scatter' | 'convergence_trace';
  inputs: string[];
  output: string;
  labels?: Labels;
}

export class UsageError extends Error {}

/** Build and write the figure; returns the SVG text that was written. */
export function renderFigure(spec: FigureSpec): string {
  const ext = path.extname(spec.output).toLowerCase();
  if (ext === '.png') {
    throw new UsageError(
      'PNG rasterization is not available in this toolchain; ' +
      'render to .svg instead');
  }
  if (ext !== '.svg') {
    throw new UsageError(`unsupported output format '${ext}'; use .svg`);
  }
  if (spec.inputs.length === 0) {
    throw new UsageError('at least one input CSV is required');
  }
  let svg: string;
  if (spec.kind === 'ratio_scatter') {
    if (spec.inputs.length !== 1) {
      throw new UsageError('ratio figures take exactly one runs CSV');
    }
    svg = renderRatioSvg(buildRatioFigure(parseCsvFile(spec.inputs[0])),
                         spec.labels);
  } else {
    svg = renderTraceSvg(buildTraceFigure(spec.inputs.map(parseCsvFile)),
                         spec.labels);
  }
  fs.writeFileSync(spec.output, svg);
  return svg;
}

const USAGE =
  'usage: render --kind {ratio|trace} --in <csv...> --out <img.svg> ' +
  '[--title T] [--x-label X] [--y-label Y]';

export function parseArgs(argv: string[]): FigureSpec {
  let kind: string | null = null;
  const inputs: string[] = [];
  let output: string | null = null;
  const labels: Labels = {};
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) {
        throw new UsageError(`${arg} needs a value\n${USAGE}`);
      }
      return argv[++i];
    };
    switch (arg) {
      case '--kind':
        kind = next();
        break;
      case '--in':
        inputs.push(next());
        while (i + 1 < argv.length && !argv[i + 1].startsWith('--')) {
          inputs.push(argv[++i]);
        }
        break;
      case '--out':
        output = next();
        break;
      case '--title':
        labels.title = next();
        break;
      case '--x-label':
        labels.xLabel = next();
        break;
      case '--y-label':
        labels.yLabel = next();
        break;
      default:
        throw new UsageError(`unknown argument '${arg}'\n${USAGE}`);
    }
  }
  if (kind !== 'ratio' && kind !== 'trace') {
    throw new UsageError(`--kind must be ratio or trace\n${USAGE}`);
  }
  if (output === null || inputs.length === 0) {
    throw new UsageError(`--in and --out are required\n${USAGE}`);
  }
  return {
    kind: kind === 'ratio' ? 'ratio_scatter' : 'convergence_trace',
    inputs,
    output,
    labels,
  };
}

export function runCli(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    renderFigure(spec);
    console.log(`wrote ${spec.output}`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(err.message);
      return 2;
    }
    if (err instanceof CsvError) {
      console.error(err.message);
      return 1;
    }
    console.error((err as Error).message);
    return 1;
  }
}

const entry = process.argv[1] ?? '';
if (entry.endsWith('render.js') || entry.endsWith('render.ts')) {
  process.exit(runCli(process.argv.slice(2)));
}
