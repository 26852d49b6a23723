/** Strict readers for the experiment CSV interfaces. */

export interface AggregateRow {
  m: number;
  phase: "pre" | "post";
  mean: number;
  std: number;
  runs: number;
}

export interface GridRow {
  C: number;
  s: number;
  m: number;
  region: string;
}

export const REGIONS = ["impossible", "pairwise_possible", "multi_only", "boundary"] as const;

const AGGREGATE_COLUMNS = ["m", "phase", "mean_frac_matched", "std_frac_matched", "runs"];
const GRID_COLUMNS = ["C", "s", "m", "region"];

function parseTable(text: string, required: string[], label: string): string[][] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${label}: file is empty`);
  }
  const header = lines[0].split(",");
  const missing = required.filter((col) => !header.includes(col));
  if (missing.length > 0) {
    throw new Error(`${label}: missing columns: ${missing.join(", ")}`);
  }
  if (lines.length === 1) {
    throw new Error(`${label}: no data rows`);
  }
  const index = required.map((col) => header.indexOf(col));
  return lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new Error(`${label}: row ${i + 2} has ${cells.length} cells, expected ${header.length}`);
    }
    return index.map((idx) => cells[idx]);
  });
}

function toNumber(text: string, what: string): number {
  const value = Number(text);
  if (!Number.isFinite(value)) {
    throw new Error(`${what}: not a number: ${JSON.stringify(text)}`);
  }
  return value;
}

export function parseAggregateCsv(text: string): AggregateRow[] {
  const rows = parseTable(text, AGGREGATE_COLUMNS, "aggregate CSV");
  return rows.map((cells, i) => {
    const phase = cells[1];
    if (phase !== "pre" && phase !== "post") {
      throw new Error(`aggregate CSV: row ${i + 2}: unknown phase ${JSON.stringify(phase)}`);
    }
    return {
      m: toNumber(cells[0], "m"),
      phase,
      mean: toNumber(cells[2], "mean_frac_matched"),
      std: toNumber(cells[3], "std_frac_matched"),
      runs: toNumber(cells[4], "runs"),
    };
  });
}

export function parseGridCsv(text: string): GridRow[] {
  const rows = parseTable(text, GRID_COLUMNS, "grid CSV");
  return rows.map((cells, i) => {
    const region = cells[3];
    if (!(REGIONS as readonly string[]).includes(region)) {
      throw new Error(`grid CSV: row ${i + 2}: unknown region label ${JSON.stringify(region)}`);
    }
    return {
      C: toNumber(cells[0], "C"),
      s: toNumber(cells[1], "s"),
      m: toNumber(cells[2], "m"),
      region,
    };
  });
}
