/** CSV loading for the bench output files.
 *
 * The bench writes plain comma-separated values with a header row and no
 * quoting, so the parser is deliberately small; every failure carries the
 * file and 1-based line number for the CLI to report.
 */

import * as fs from 'node:fs';

export class CsvError extends Error {
  constructor(message: string, public readonly file: string,
              public readonly line: number) {
    super(`${file}:${line}: ${message}`);
  }
}

export interface CsvTable {
  file: string;
  header: string[];
  rows: string[][];
}

export function parseCsvFile(path: string): CsvTable {
  let text: string;
  try {
    text = fs.readFileSync(path, 'utf8');
  } catch (err) {
    throw new CsvError(`cannot read file (${(err as Error).message})`, path, 0);
  }
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1] === '') {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new CsvError('file is empty', path, 1);
  }
  const header = lines[0].split(',').map((h) => h.trim());
  const rows: string[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(',');
    if (cells.length !== header.length) {
      throw new CsvError(
        `expected ${header.length} columns, found ${cells.length}`, path, i + 1);
    }
    rows.push(cells);
  }
  if (rows.length === 0) {
    throw new CsvError('no data rows', path, 1);
  }
  return { file: path, header, rows };
}

/** Column index by name; header problems are reported on line 1. */
export function columnIndex(table: CsvTable, name: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new CsvError(`missing column '${name}'`, table.file, 1);
  }
  return idx;
}

/** Numeric cell of data row `rowIdx` (0-based); empty cells return null. */
export function numberCell(table: CsvTable, rowIdx: number,
                           colIdx: number): number | null {
  const raw = table.rows[rowIdx][colIdx].trim();
  if (raw === '') {
    return null;
  }
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new CsvError(
      `expected a number in column '${table.header[colIdx]}', got '${raw}'`,
      table.file, rowIdx + 2);
  }
  return value;
}
