import { scaleLinear, scaleSequentialLog } from "d3-scale";

import { bool, num, parseCsv } from "../schemas.ts";
import { MARGIN, HEIGHT, WIDTH, axes, document, el } from "../svg.ts";

function heatColor(t: number): string {
  // deterministic blue -> yellow ramp, no d3-color interpolator needed
  const r = Math.round(40 + 215 * t);
  const g = Math.round(60 + 180 * t);
  const b = Math.round(200 - 160 * t);
  return `rgb(${r},${g},${b})`;
}

/**
 * Rupture-index surface: heat map of the critical sample index over the
 * (eps, z0) grid; out-of-validity cells are hatched gray.
 */
export function renderSurface(sweepCsv: string): string {
  const rows = parseCsv(sweepCsv, "sweep");
  if (rows.length === 0) throw new Error("sweep: no rows");
  const epsVals = [...new Set(rows.map((r) => num(r, "eps")))].sort((a, b) => a - b);
  const z0Vals = [...new Set(rows.map((r) => num(r, "z0")))].sort((a, b) => a - b);
  const x = scaleLinear(
    [epsVals[0], epsVals[epsVals.length - 1]],
    [MARGIN.left, WIDTH - MARGIN.right],
  );
  const y = scaleLinear(
    [z0Vals[0], z0Vals[z0Vals.length - 1]],
    [HEIGHT - MARGIN.bottom, MARGIN.top],
  );
  const nVals = rows.filter((r) => bool(r, "valid")).map((r) => num(r, "n_crit"));
  if (nVals.length === 0) throw new Error("sweep: no valid cells");
  const color = scaleSequentialLog(
    [Math.min(...nVals), Math.max(...nVals)],
    heatColor,
  );

  const cellW = (WIDTH - MARGIN.left - MARGIN.right) / epsVals.length;
  const cellH = (HEIGHT - MARGIN.top - MARGIN.bottom) / z0Vals.length;
  const parts: string[] = [];
  for (const row of rows) {
    const valid = bool(row, "valid");
    parts.push(
      el("rect", {
        x: x(num(row, "eps")) - cellW / 2,
        y: y(num(row, "z0")) - cellH / 2,
        width: cellW,
        height: cellH,
        fill: valid ? color(num(row, "n_crit")) : "#bbbbbb",
      }),
    );
  }
  parts.push(
    axes(
      x.ticks(5).map((t) => ({ pos: x(t), label: String(t) })),
      y.ticks(5).map((t) => ({ pos: y(t), label: String(t) })),
      "eps",
      "z0",
    ),
  );
  return document(parts.join("\n"));
}
