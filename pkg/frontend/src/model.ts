/** Board view-model and move composer.
 *
 * The view state always mirrors the session returned by the API; the only
 * rules surfaced client-side are the two structural ones worth good UX:
 * answers go to the opposite side, with the colour locked to the first
 * player's choice.  Everything else is validated by the server.
 */
import type { MoveDoc, SessionDoc, TriggerDoc } from "./api.js";

export interface VertexView {
  id: number;
  label: string;
  palette: number[]; // colour chips, ascending
  pebbles: number[]; // pebble pair indices sitting here
  selected: boolean;
}

export interface SideView {
  side: "G" | "H";
  vertices: VertexView[];
  edges: [number, number][];
  directed: boolean;
}

export interface Banner {
  kind: string;
  text: string;
}

export class BoardViewModel {
  session: SessionDoc;
  composer: MoveComposer;

  constructor(session: SessionDoc) {
    this.session = session;
    this.composer = new MoveComposer(session);
  }

  static fromSession(session: SessionDoc): BoardViewModel {
    return new BoardViewModel(session);
  }

  apply(session: SessionDoc): string[] {
    const diff = paletteDiff(this.session, session);
    this.session = session;
    this.composer = new MoveComposer(session);
    return diff;
  }

  side(which: "G" | "H"): SideView {
    const graph = which === "G" ? this.session.g : this.session.h;
    const palettes =
      which === "G"
        ? this.session.position.palettes_g
        : this.session.position.palettes_h;
    const pebbles =
      which === "G"
        ? this.session.position.pebbles_g ?? []
        : this.session.position.pebbles_h ?? [];
    const vertices: VertexView[] = [];
    for (let v = 0; v < graph.n; v++) {
      vertices.push({
        id: v,
        label: graph.labels?.[String(v)] ?? String(v),
        palette: palettes[v] ?? [],
        pebbles: pebbles
          .map((where, pair) => (where === v ? pair : -1))
          .filter((p) => p >= 0),
        selected:
          this.composer.side === which && this.composer.selection.has(v),
      });
    }
    return { side: which, vertices, edges: graph.edges, directed: graph.directed };
  }

  banners(): Banner[] {
    const status = this.session.status;
    if (status.state !== "won_by_forall") return [];
    return (status.triggers ?? []).map((t: TriggerDoc) => ({
      kind: t.kind,
      text: describeTrigger(t),
    }));
  }

  roundCounter(): number {
    return this.session.round;
  }
}

export function describeTrigger(t: TriggerDoc): string {
  const w = t.witness as Record<string, unknown>;
  switch (t.kind) {
    case "C1":
      return `palette {${(w.palette as number[]).join(",")}} realized only on side ${w.nonempty_side}`;
    case "C2":
      return `edge between palettes exists only on side ${w.edge_side}`;
    case "C3":
      return `coverage mismatch: vertex ${w.uncovered_vertex} on side ${w.uncovered_side} has no incoming edge from the source palette`;
    case "C4":
      return `origin mismatch: vertex ${w.unoriginated_vertex} on side ${w.unoriginated_side} has no outgoing edge into the target palette`;
    default:
      return `pebble map broken (${w.reason ?? "mismatch"})`;
  }
}

/** Palette repaint diff as "side:vertex" strings, for animation. */
export function paletteDiff(before: SessionDoc, after: SessionDoc): string[] {
  const out: string[] = [];
  const sides: ["G" | "H", number[][], number[][]][] = [
    ["G", before.position.palettes_g, after.position.palettes_g],
    ["H", before.position.palettes_h, after.position.palettes_h],
  ];
  for (const [side, b, a] of sides) {
    const n = Math.max(b.length, a.length);
    for (let v = 0; v < n; v++) {
      if (JSON.stringify(b[v] ?? []) !== JSON.stringify(a[v] ?? [])) {
        out.push(`${side}:${v}`);
      }
    }
  }
  return out;
}

export class ComposerError extends Error {}

/** Builds the next move or answer under the side and colour locks. */
export class MoveComposer {
  readonly answering: boolean;
  readonly side: "G" | "H" | null;
  readonly sideLocked: boolean;
  readonly colourLocked: boolean;
  colour: number | null;
  selection: Set<number> = new Set();
  private chosenSide: "G" | "H" | null = null;

  constructor(private session: SessionDoc) {
    this.answering = session.pending !== null;
    if (this.answering) {
      const pend = session.pending!;
      this.side = pend.side === "G" ? "H" : "G";
      this.sideLocked = true;
      this.colour = pend.colour ?? null;
      this.colourLocked = true;
    } else {
      this.side = null;
      this.sideLocked = false;
      this.colour = null;
      this.colourLocked = false;
    }
  }

  get activeSide(): "G" | "H" | null {
    return this.sideLocked ? this.side : this.chosenSide;
  }

  pickSide(side: "G" | "H"): void {
    if (this.sideLocked && side !== this.side) {
      throw new ComposerError(`answers go to side ${this.side}`);
    }
    if (!this.sideLocked) {
      if (this.chosenSide !== side) this.selection.clear();
      this.chosenSide = side;
    }
  }

  pickColour(colour: number): void {
    if (this.colourLocked && colour !== this.colour) {
      throw new ComposerError(`the answer keeps colour ${this.colour}`);
    }
    if (colour < 0 || colour >= this.session.colours) {
      throw new ComposerError("colour out of range");
    }
    if (!this.colourLocked) this.colour = colour;
  }

  toggleVertex(side: "G" | "H", v: number): void {
    this.pickSide(side);
    if (this.selection.has(v)) {
      this.selection.delete(v);
    } else {
      this.selection.add(v);
    }
  }

  clear(): void {
    this.selection.clear();
    if (!this.colourLocked) this.colour = null;
    if (!this.sideLocked) this.chosenSide = null;
  }

  buildMove(): MoveDoc {
    if (this.answering) throw new ComposerError("an answer is due, not a move");
    if (this.colour === null) throw new ComposerError("pick a colour first");
    const side = this.activeSide;
    if (side === null) throw new ComposerError("pick a side first");
    return {
      type: "colour",
      side,
      colour: this.colour,
      vertices: [...this.selection].sort((a, b) => a - b),
    };
  }

  buildAnswer(): { vertices: number[] } {
    if (!this.answering) throw new ComposerError("a move is due, not an answer");
    return { vertices: [...this.selection].sort((a, b) => a - b) };
  }
}
