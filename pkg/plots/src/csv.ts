import Papa from "papaparse";

/** Raised when an input file does not match the CLI's declared layout. */
export class SchemaError extends Error {
  constructor(message: string, readonly offendingColumn?: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface Table {
  columns: string[];
  rows: number[][];
  comment: string;
}

/** Parse a CLI CSV: one `# qkr-detector ...` comment line, then a header
 *  row and numeric records. */
export function parseTable(text: string, path = "<csv>"): Table {
  const lines = text.split(/\r?\n/).filter((ln) => ln.length > 0);
  const comment = lines[0]?.startsWith("#") ? lines[0] : "";
  const body = lines.filter((ln) => !ln.startsWith("#")).join("\n");
  const parsed = Papa.parse<string[]>(body, { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${path}: ${parsed.errors[0].message}`);
  }
  const records = parsed.data;
  if (records.length < 2) {
    throw new SchemaError(`${path}: no data rows`);
  }
  const columns = records[0];
  const rows = records.slice(1).map((rec, i) => {
    if (rec.length !== columns.length) {
      throw new SchemaError(
        `${path}: row ${i + 1} has ${rec.length} fields, expected ${columns.length}`,
      );
    }
    return rec.map((field) => {
      const value = field === "" ? NaN : Number(field);
      return value;
    });
  });
  return { columns, rows, comment };
}

/** Check that every expected column is present, naming the first missing
 *  one (string columns such as sweep flags are checked by name only). */
export function requireColumns(
  table: Table,
  expected: string[],
  path: string,
): void {
  for (const name of expected) {
    if (!table.columns.includes(name)) {
      throw new SchemaError(
        `${path}: missing column '${name}' (found: ${table.columns.join(",")})`,
        name,
      );
    }
  }
}

export function column(table: Table, name: string, path = "<csv>"): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`${path}: missing column '${name}'`, name);
  }
  return table.rows.map((row) => row[idx]);
}

/** Parse a header-less numeric matrix (the Husimi grid layout). */
export function parseMatrix(text: string, path = "<csv>"): number[][] {
  const lines = text
    .split(/\r?\n/)
    .filter((ln) => ln.length > 0 && !ln.startsWith("#"));
  if (lines.length === 0) {
    throw new SchemaError(`${path}: empty matrix`);
  }
  const rows = lines.map((ln) => ln.split(",").map(Number));
  const width = rows[0].length;
  rows.forEach((row, i) => {
    if (row.length !== width) {
      throw new SchemaError(`${path}: ragged matrix at row ${i}`);
    }
    row.forEach((v, j) => {
      if (!Number.isFinite(v)) {
        throw new SchemaError(`${path}: non-numeric cell at (${i}, ${j})`);
      }
    });
  });
  return rows;
}
