/** Minimal CSV reading for the solver's outputs (no quoting in our files). */

export class CsvError extends Error {}

export class EmptyCsvError extends CsvError {
  constructor(path: string) {
    super(`CSV has no data rows: ${path}`);
    this.name = 'EmptyCsvError';
  }
}

export class MissingColumnError extends CsvError {
  constructor(column: string, path: string) {
    super(`column '${column}' not found in ${path}`);
    this.name = 'MissingColumnError';
  }
}

export interface Table {
  path: string;
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string, path: string): Table {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new EmptyCsvError(path);
  }
  const header = lines[0].split(',').map((h) => h.trim());
  const rows = lines.slice(1).map((l) => l.split(',').map((c) => c.trim()));
  return { path, header, rows };
}

export function numericColumn(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new MissingColumnError(name, table.path);
  }
  return table.rows.map((r) => Number(r[idx]));
}
