#!/usr/bin/env node
/** CLI: plot curves --in agg.csv --out fig.png | plot phase --in grid.csv --out fig.png */

import { readFileSync, writeFileSync } from "node:fs";

import { parseAggregateCsv, parseGridCsv } from "./csv.js";
import { renderCurves } from "./curves.js";
import { encodePng } from "./png.js";
import { renderPhase } from "./phase.js";

const USAGE = `usage:
  plot curves --in <aggregate.csv> --out <figure.png> [--title <text>]
  plot phase  --in <grid.csv>      --out <figure.png> [--title <text>]`;

interface Args {
  input: string;
  output: string;
  title?: string;
}

function parseArgs(argv: string[]): Args {
  let input: string | undefined;
  let output: string | undefined;
  let title: string | undefined;
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) throw new Error(`missing value for ${flag}`);
    if (flag === "--in") input = value;
    else if (flag === "--out") output = value;
    else if (flag === "--title") title = value;
    else throw new Error(`unknown flag ${flag}`);
  }
  if (!input || !output) throw new Error("both --in and --out are required");
  return { input, output, title };
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command !== "curves" && command !== "phase") {
    process.stderr.write(USAGE + "\n");
    return 2;
  }
  try {
    const args = parseArgs(rest);
    const text = readFileSync(args.input, "utf8");
    const image =
      command === "curves"
        ? renderCurves(parseAggregateCsv(text), { title: args.title }).image
        : renderPhase(parseGridCsv(text), { title: args.title }).image;
    writeFileSync(args.output, encodePng(image));
    process.stderr.write(`wrote ${args.output} (${image.width}x${image.height})\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
