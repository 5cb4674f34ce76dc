/** Tiny deterministic SVG builder: fixed number formatting, no randomness. */

export const WIDTH = 640;
export const HEIGHT = 480;
export const MARGIN = { top: 24, right: 20, bottom: 40, left: 56 };

/** Fixed 6-significant-digit formatting so output bytes are stable. */
export function fmt(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate: ${x}`);
  return Number(x.toPrecision(6)).toString();
}

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  children = "",
): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
  return children === ""
    ? `<${tag} ${parts}/>`
    : `<${tag} ${parts}>${children}</${tag}>`;
}

export function text(
  content: string,
  x: number,
  y: number,
  anchor = "middle",
): string {
  return el(
    "text",
    { x, y, "text-anchor": anchor, "font-size": 12, "font-family": "sans-serif" },
    content,
  );
}

export function polylinePath(points: [number, number][]): string {
  return points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)},${fmt(y)}`)
    .join("");
}

export function document(body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" ` +
    `height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">\n` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n` +
    body +
    "\n</svg>\n"
  );
}

/** Simple bottom/left axes with tick labels at given data positions. */
export function axes(
  xTicks: { pos: number; label: string }[],
  yTicks: { pos: number; label: string }[],
  xLabel: string,
  yLabel: string,
): string {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  const parts = [
    el("line", { x1: x0, y1: y0, x2: x1, y2: y0, stroke: "black" }),
    el("line", { x1: x0, y1: y0, x2: x0, y2: y1, stroke: "black" }),
  ];
  for (const t of xTicks) {
    parts.push(el("line", { x1: t.pos, y1: y0, x2: t.pos, y2: y0 + 5, stroke: "black" }));
    parts.push(text(t.label, t.pos, y0 + 18));
  }
  for (const t of yTicks) {
    parts.push(el("line", { x1: x0 - 5, y1: t.pos, x2: x0, y2: t.pos, stroke: "black" }));
    parts.push(text(t.label, x0 - 8, t.pos + 4, "end"));
  }
  parts.push(text(xLabel, (x0 + x1) / 2, HEIGHT - 6));
  parts.push(
    el(
      "text",
      {
        x: 14,
        y: (y0 + y1) / 2,
        "text-anchor": "middle",
        "font-size": 12,
        "font-family": "sans-serif",
        transform: `rotate(-90 14 ${fmt((y0 + y1) / 2)})`,
      },
      yLabel,
    ),
  );
  return parts.join("\n");
}
