import Papa from "papaparse";

/** Raised when an input file does not match its frozen CSV contract. */
export class SchemaMismatch extends Error {}

export const HEADERS = {
  simulate: ["tau", "z", "p", "y", "I_sampled_drift", "kind"],
  table1: ["eps", "tau_analytic", "tau_numeric", "rel_dev", "censored"],
  sweep: ["eps", "z0", "n_crit", "valid"],
  sections: ["n", "component_id", "closed", "z", "p"],
  validity: ["y0", "z0", "inside"],
  boundary: ["y0", "z0"],
} as const;

export type SchemaName = keyof typeof HEADERS;

/** Parse CSV text and fail loudly unless the header matches the schema. */
export function parseCsv(
  text: string,
  schema: SchemaName,
): Record<string, string>[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaMismatch(
      `${schema}: ${parsed.errors[0].message} (row ${parsed.errors[0].row})`,
    );
  }
  const expected = HEADERS[schema].join(",");
  const got = (parsed.meta.fields ?? []).join(",");
  if (got !== expected) {
    throw new SchemaMismatch(`${schema}: header ${got} != ${expected}`);
  }
  return parsed.data;
}

export function num(row: Record<string, string>, field: string): number {
  const value = Number(row[field]);
  if (Number.isNaN(value)) {
    throw new SchemaMismatch(`non-numeric ${field}: ${row[field]}`);
  }
  return value;
}

export function bool(row: Record<string, string>, field: string): boolean {
  const value = row[field];
  if (value !== "true" && value !== "false") {
    throw new SchemaMismatch(`non-boolean ${field}: ${value}`);
  }
  return value === "true";
}
