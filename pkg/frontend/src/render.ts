/** Pure SVG rendering: graphs with directed arrows and loops, and palettes
 * as ordered colour chips beside each vertex (palette identity, not blend,
 * is the game-relevant datum). */
import type { SideView } from "./model.js";
import type { Point } from "./layout.js";

export const CHIP_COLOURS = ["#d33", "#36c", "#2a2", "#c92", "#92c", "#299"];

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderSide(view: SideView, layout: Point[], width = 320, height = 320): string {
  const parts: string[] = [];
  parts.push(
    `<svg viewBox="0 0 ${width} ${height}" data-side="${view.side}" xmlns="http://www.w3.org/2000/svg">`,
  );
  parts.push(
    `<defs><marker id="arr-${view.side}" markerWidth="7" markerHeight="7" refX="6" refY="3" orient="auto">` +
      `<path d="M0,0 L6,3 L0,6 z" fill="#555"/></marker></defs>`,
  );
  const seen = new Set<string>();
  for (const [u, v] of view.edges) {
    if (u === v) {
      const p = layout[u];
      parts.push(
        `<circle cx="${p.x + 10}" cy="${p.y - 10}" r="8" fill="none" stroke="#555" data-loop="${u}"/>`,
      );
      continue;
    }
    const key = view.directed ? `${u}>${v}` : `${Math.min(u, v)}-${Math.max(u, v)}`;
    if (seen.has(key)) continue;
    seen.add(key);
    const a = layout[u];
    const b = layout[v];
    const marker = view.directed ? ` marker-end="url(#arr-${view.side})"` : "";
    parts.push(
      `<line x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" stroke="#555"${marker} data-edge="${key}"/>`,
    );
  }
  for (const vert of view.vertices) {
    const p = layout[vert.id];
    const ring = vert.selected ? ` stroke="#f80" stroke-width="3"` : ` stroke="#222"`;
    parts.push(
      `<circle class="vertex" data-side="${view.side}" data-vertex="${vert.id}" ` +
        `cx="${p.x}" cy="${p.y}" r="11" fill="#fff"${ring}/>`,
    );
    parts.push(
      `<text x="${p.x}" y="${p.y + 4}" text-anchor="middle" font-size="10">${esc(vert.label)}</text>`,
    );
    vert.palette.forEach((colour, i) => {
      parts.push(
        `<rect class="chip" data-colour="${colour}" x="${p.x - 11 + i * 8}" y="${p.y + 13}" ` +
          `width="7" height="7" fill="${CHIP_COLOURS[colour % CHIP_COLOURS.length]}"/>`,
      );
    });
    vert.pebbles.forEach((pair, i) => {
      parts.push(
        `<circle class="pebble" data-pair="${pair}" cx="${p.x - 14}" cy="${p.y - 12 - i * 8}" r="4" fill="#000"/>`,
      );
    });
  }
  parts.push("</svg>");
  return parts.join("");
}

export function renderBanners(banners: { kind: string; text: string }[]): string {
  if (!banners.length) return "";
  const items = banners
    .map((b) => `<div class="banner" data-kind="${b.kind}"><b>${b.kind}</b> ${esc(b.text)}</div>`)
    .join("");
  return `<div class="banners">${items}</div>`;
}
