/** Deterministic force-directed layout.
 *
 * The random seed derives from the graph document itself, so the same graph
 * always renders identically across sessions and reloads.
 */
import type { GraphDoc } from "./api.js";

export interface Point {
  x: number;
  y: number;
}

function fnv1a(text: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193) >>> 0;
  }
  return h >>> 0;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function graphSeed(doc: GraphDoc): number {
  const edges = [...doc.edges].map(([u, v]) => `${u}>${v}`).sort();
  return fnv1a(`${doc.directed}|${doc.n}|${edges.join(",")}`);
}

export function forceLayout(
  doc: GraphDoc,
  width = 320,
  height = 320,
  iterations = 250,
): Point[] {
  const n = doc.n;
  if (n === 0) return [];
  const rand = mulberry32(graphSeed(doc));
  const pts: Point[] = [];
  for (let v = 0; v < n; v++) {
    pts.push({ x: rand() * width, y: rand() * height });
  }
  const adjacent = new Set(doc.edges.map(([u, v]) => `${Math.min(u, v)}:${Math.max(u, v)}`));
  const ideal = Math.min(width, height) / (Math.sqrt(n) + 1);
  for (let it = 0; it < iterations; it++) {
    const temp = 0.1 * Math.min(width, height) * (1 - it / iterations);
    const disp: Point[] = pts.map(() => ({ x: 0, y: 0 }));
    for (let a = 0; a < n; a++) {
      for (let b = a + 1; b < n; b++) {
        let dx = pts[a].x - pts[b].x;
        let dy = pts[a].y - pts[b].y;
        let d = Math.hypot(dx, dy) || 0.01;
        const rep = (ideal * ideal) / d;
        dx /= d;
        dy /= d;
        disp[a].x += dx * rep;
        disp[a].y += dy * rep;
        disp[b].x -= dx * rep;
        disp[b].y -= dy * rep;
        if (adjacent.has(`${a}:${b}`)) {
          const att = (d * d) / ideal;
          disp[a].x -= dx * att;
          disp[a].y -= dy * att;
          disp[b].x += dx * att;
          disp[b].y += dy * att;
        }
      }
    }
    for (let v = 0; v < n; v++) {
      const d = Math.hypot(disp[v].x, disp[v].y) || 0.01;
      const step = Math.min(d, temp);
      pts[v].x += (disp[v].x / d) * step;
      pts[v].y += (disp[v].y / d) * step;
      pts[v].x = Math.min(width - 16, Math.max(16, pts[v].x));
      pts[v].y = Math.min(height - 16, Math.max(16, pts[v].y));
    }
  }
  return pts.map((p) => ({ x: Math.round(p.x * 100) / 100, y: Math.round(p.y * 100) / 100 }));
}
