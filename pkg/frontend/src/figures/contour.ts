import { contours } from "d3-contour";
import { scaleLinear } from "d3-scale";

import { bool, num, parseCsv } from "../schemas.ts";
import { MARGIN, HEIGHT, WIDTH, axes, document, el, fmt } from "../svg.ts";

/**
 * Iso-line figure of the critical sample index over the (eps, z0) grid.
 * Invalid cells are assigned the grid maximum so contour lines terminate
 * at the validity boundary instead of crossing it.
 */
export function renderContour(sweepCsv: string, thresholds = 8): string {
  const rows = parseCsv(sweepCsv, "sweep");
  if (rows.length === 0) throw new Error("sweep: no rows");
  const epsVals = [...new Set(rows.map((r) => num(r, "eps")))].sort((a, b) => a - b);
  const z0Vals = [...new Set(rows.map((r) => num(r, "z0")))].sort((a, b) => a - b);
  const nx = epsVals.length;
  const ny = z0Vals.length;
  if (rows.length !== nx * ny) {
    throw new Error(`sweep: ${rows.length} rows is not a ${nx}x${ny} grid`);
  }
  const index = new Map(
    epsVals.map((v, i) => [v, i] as const),
  );
  const zindex = new Map(z0Vals.map((v, i) => [v, i] as const));
  const values = new Array<number>(nx * ny).fill(NaN);
  let vmax = -Infinity;
  for (const row of rows) {
    if (bool(row, "valid")) vmax = Math.max(vmax, num(row, "n_crit"));
  }
  for (const row of rows) {
    const i = index.get(num(row, "eps"))!;
    const j = zindex.get(num(row, "z0"))!;
    values[j * nx + i] = bool(row, "valid") ? num(row, "n_crit") : vmax;
  }

  const x = scaleLinear([0, nx - 1], [MARGIN.left, WIDTH - MARGIN.right]);
  const y = scaleLinear([0, ny - 1], [HEIGHT - MARGIN.bottom, MARGIN.top]);
  const xData = scaleLinear(
    [epsVals[0], epsVals[nx - 1]],
    [MARGIN.left, WIDTH - MARGIN.right],
  );
  const yData = scaleLinear(
    [z0Vals[0], z0Vals[ny - 1]],
    [HEIGHT - MARGIN.bottom, MARGIN.top],
  );

  const parts: string[] = [];
  const bands = contours().size([nx, ny]).thresholds(thresholds)(values);
  for (const band of bands) {
    const path = band.coordinates
      .flat()
      .map(
        (ring) =>
          ring
            .map(
              ([i, j], k) =>
                `${k === 0 ? "M" : "L"}${fmt(x(i))},${fmt(y(j))}`,
            )
            .join("") + "Z",
      )
      .join("");
    if (path === "") continue;
    parts.push(
      el("path", { d: path, fill: "none", stroke: "#333333", "stroke-width": 1 }),
    );
    parts.push(
      el(
        "text",
        {
          x: WIDTH - MARGIN.right - 4,
          y: MARGIN.top + 14 * (parts.length / 2),
          "text-anchor": "end",
          "font-size": 10,
          "font-family": "sans-serif",
          fill: "#333333",
        },
        `n = ${fmt(band.value)}`,
      ),
    );
  }
  parts.push(
    axes(
      xData.ticks(5).map((t) => ({ pos: xData(t), label: String(t) })),
      yData.ticks(5).map((t) => ({ pos: yData(t), label: String(t) })),
      "eps",
      "z0",
    ),
  );
  return document(parts.join("\n"));
}
