import { scaleLinear } from "d3-scale";

import { num, parseCsv } from "../schemas.ts";
import { MARGIN, HEIGHT, WIDTH, axes, document, el, polylinePath, text } from "../svg.ts";

export interface TimeseriesOptions {
  /** Analytic rupture time; drawn as a vertical marker when given. */
  tauRupt?: number;
  /** Clip |z| for display so the divergence tail doesn't flatten the rest. */
  clip?: number;
}

/**
 * z(tau) time-series figure with the divergence tail and an optional
 * vertical marker at the analytically predicted rupture time.
 */
export function renderTimeseries(
  simulateCsv: string,
  options: TimeseriesOptions = {},
): string {
  const rows = parseCsv(simulateCsv, "simulate");
  if (rows.length === 0) throw new Error("simulate: no rows");
  const clip = options.clip ?? 3.0;
  const pts: [number, number][] = rows.map((r) => {
    const z = num(r, "z");
    return [num(r, "tau"), Math.max(-clip, Math.min(clip, z))];
  });
  pts.sort((a, b) => a[0] - b[0]);

  const tauMax = pts[pts.length - 1][0];
  const x = scaleLinear([0, tauMax], [MARGIN.left, WIDTH - MARGIN.right]);
  const zAbs = Math.max(...pts.map(([, z]) => Math.abs(z)));
  const y = scaleLinear([-zAbs, zAbs], [HEIGHT - MARGIN.bottom, MARGIN.top]);

  const parts: string[] = [
    el("path", {
      d: polylinePath(pts.map(([t, z]) => [x(t), y(z)] as [number, number])),
      fill: "none",
      stroke: "#1f77b4",
      "stroke-width": 1,
    }),
  ];
  if (options.tauRupt !== undefined && options.tauRupt <= tauMax) {
    const xr = x(options.tauRupt);
    parts.push(
      el("line", {
        x1: xr, y1: MARGIN.top, x2: xr, y2: HEIGHT - MARGIN.bottom,
        stroke: "red", "stroke-dasharray": "6,4",
      }),
    );
    parts.push(text("tau_rupt", xr, MARGIN.top - 6));
  }
  parts.push(
    axes(
      x.ticks(6).map((t) => ({ pos: x(t), label: String(t) })),
      y.ticks(6).map((t) => ({ pos: y(t), label: String(t) })),
      "tau",
      "z",
    ),
  );
  return document(parts.join("\n"));
}
