import { scaleLinear } from "d3-scale";

import { bool, num, parseCsv } from "../schemas.ts";
import { MARGIN, HEIGHT, WIDTH, axes, document, el, polylinePath } from "../svg.ts";

const PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b"];

/**
 * Tube cross-sections: one polyline per (n, component), overlaying every
 * sampled index in the file.  Open components (the post-rupture horseshoe)
 * are drawn dashed in red.
 */
export function renderSections(sectionsCsv: string): string {
  const rows = parseCsv(sectionsCsv, "sections");
  if (rows.length === 0) throw new Error("sections: no rows");

  const groups = new Map<string, { closed: boolean; pts: [number, number][] }>();
  const nOrder: string[] = [];
  for (const row of rows) {
    const key = `${row.n}:${row.component_id}`;
    if (!groups.has(key)) {
      groups.set(key, { closed: bool(row, "closed"), pts: [] });
      if (!nOrder.includes(row.n)) nOrder.push(row.n);
    }
    groups.get(key)!.pts.push([num(row, "z"), num(row, "p")]);
  }

  const allZ = rows.map((r) => num(r, "z"));
  const allP = rows.map((r) => num(r, "p"));
  const x = scaleLinear(
    [Math.min(...allZ), Math.max(...allZ)],
    [MARGIN.left, WIDTH - MARGIN.right],
  );
  const y = scaleLinear(
    [Math.min(...allP), Math.max(...allP)],
    [HEIGHT - MARGIN.bottom, MARGIN.top],
  );

  const parts: string[] = [];
  for (const [key, group] of groups) {
    const n = key.split(":")[0];
    const color = group.closed
      ? PALETTE[nOrder.indexOf(n) % PALETTE.length]
      : "red";
    const attrs: Record<string, string | number> = {
      d:
        polylinePath(group.pts.map(([z, p]) => [x(z), y(p)] as [number, number])) +
        (group.closed ? "Z" : ""),
      fill: "none",
      stroke: color,
      "stroke-width": 1.2,
    };
    if (!group.closed) attrs["stroke-dasharray"] = "5,3";
    parts.push(el("path", attrs));
  }
  parts.push(
    axes(
      x.ticks(6).map((t) => ({ pos: x(t), label: String(t) })),
      y.ticks(6).map((t) => ({ pos: y(t), label: String(t) })),
      "z",
      "p",
    ),
  );
  return document(parts.join("\n"));
}
