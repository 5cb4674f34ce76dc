import { scaleLinear } from "d3-scale";

import { bool, num, parseCsv } from "../schemas.ts";
import { MARGIN, HEIGHT, WIDTH, axes, document, el, polylinePath } from "../svg.ts";

export interface ValidityOptions {
  /** Reference parameter pair highlighted on the plot. */
  markedPoint?: [number, number];
}

/**
 * Validity-region figure: raster of the applicability condition in the
 * (y0, z0) plane, the traced region boundary, and a marked reference point.
 */
export function renderValidity(
  rasterCsv: string,
  boundaryCsv: string | null,
  options: ValidityOptions = {},
): string {
  const rows = parseCsv(rasterCsv, "validity");
  if (rows.length === 0) throw new Error("validity: no rows");
  const y0s = rows.map((r) => num(r, "y0"));
  const z0s = rows.map((r) => num(r, "z0"));
  const x = scaleLinear(
    [Math.min(...y0s), Math.max(...y0s)],
    [MARGIN.left, WIDTH - MARGIN.right],
  );
  const y = scaleLinear(
    [Math.min(...z0s), Math.max(...z0s)],
    [HEIGHT - MARGIN.bottom, MARGIN.top],
  );

  const parts: string[] = [];
  for (const row of rows) {
    parts.push(
      el("circle", {
        cx: x(num(row, "y0")),
        cy: y(num(row, "z0")),
        r: 2.2,
        fill: bool(row, "inside") ? "#4a90d9" : "#d9d9d9",
      }),
    );
  }
  if (boundaryCsv !== null) {
    const pts = parseCsv(boundaryCsv, "boundary").map(
      (r) => [x(num(r, "y0")), y(num(r, "z0"))] as [number, number],
    );
    if (pts.length > 1) {
      parts.push(
        el("path", {
          d: polylinePath(pts),
          fill: "none",
          stroke: "black",
          "stroke-width": 1.5,
        }),
      );
    }
  }
  const marked = options.markedPoint ?? [1.0, 0.25];
  parts.push(
    el("circle", { cx: x(marked[0]), cy: y(marked[1]), r: 5, fill: "red" }),
  );
  parts.push(
    axes(
      x.ticks(6).map((t) => ({ pos: x(t), label: String(t) })),
      y.ticks(6).map((t) => ({ pos: y(t), label: String(t) })),
      "y0",
      "z0",
    ),
  );
  return document(parts.join("\n"));
}
