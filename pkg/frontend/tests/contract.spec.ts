/** Contract tests against a live service: the playboard mirrors the API
 * exactly and the two surfaced rules (side lock, colour lock) never disagree
 * with the server. */
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { ApiError, SeuratApi, type SessionDoc } from "../src/api.js";
import { BoardViewModel, ComposerError, describeTrigger } from "../src/model.js";
import { forceLayout, graphSeed } from "../src/layout.js";
import { renderBanners, renderSide } from "../src/render.js";

const PORT = 8650 + Math.floor(Math.random() * 200);
const BASE = `http://127.0.0.1:${PORT}`;
let service: ChildProcess;
const api = new SeuratApi(BASE);

async function waitReady(): Promise<void> {
  for (let i = 0; i < 120; i++) {
    try {
      const res = await fetch(`${BASE}/v1/sessions/none`);
      if (res.status === 404) return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), "seurat-playboard-"));
  service = spawn(
    "python3",
    ["-m", "seurat.svc.cli", "serve", "--port", String(PORT), "--data-dir", dataDir],
    { cwd: join(__dirname, "..", ".."), stdio: "ignore" },
  );
  await waitReady();
}, 60_000);

afterAll(() => {
  service?.kill();
});

describe("playboard contract", () => {
  it("plays the strong one-colour line and shows the coverage banner", async () => {
    const doc = await api.createSession({
      g: { example: "fig1_g" },
      h: { example: "fig1_h" },
      colours: 1,
      variant: "strong",
      human_role: "forall",
      engine: { kind: "solver" },
    });
    const vm = BoardViewModel.fromSession(doc);
    expect(vm.session.your_turn).toBe(true);
    expect(vm.banners()).toEqual([]);

    // compose the winning opening: the added 2-cycle, coloured on side H
    vm.composer.pickColour(0);
    vm.composer.toggleVertex("H", 6);
    vm.composer.toggleVertex("H", 7);
    const move = vm.composer.buildMove();
    expect(move).toEqual({ type: "colour", side: "H", colour: 0, vertices: [6, 7] });

    const after = await api.postMove(doc.id, move);
    const repainted = vm.apply(after);
    expect(repainted.length).toBeGreaterThan(0); // engine reply visualized
    expect(vm.session.status.state).toBe("won_by_forall");
    const kinds = vm.banners().map((b) => b.kind);
    expect(kinds).toContain("C3");
    for (const b of vm.banners()) {
      expect(b.text.length).toBeGreaterThan(0);
    }
  }, 60_000);

  it("surfaces the winning blue move in the hint panel", async () => {
    const doc = await api.createSession({
      g: { example: "fig6" },
      h: { example: "fig7" },
      colours: 2,
      human_role: "both",
    });
    await api.postMove(doc.id, {
      type: "colour",
      side: "G",
      colour: 0,
      vertices: [5],
    });
    await api.postAnswer(doc.id, { vertices: [3] });
    const hints = await api.getHint(doc.id);
    expect(hints.provenance).toBe("certified");
    const blue4 = hints.hints.find(
      (h) =>
        JSON.stringify(h.move) ===
        JSON.stringify({ type: "colour", colour: 1, side: "G", vertices: [4] }),
    );
    expect(blue4).toBeDefined();
    expect(blue4!.eval.winning).toBe(true);
  }, 120_000);

  it("keeps view state deep-equal to the API across 20 interactions", async () => {
    const doc = await api.createSession({
      g: { example: "fig1_g" },
      h: { example: "fig1_g" },
      colours: 2,
      human_role: "both",
    });
    const vm = BoardViewModel.fromSession(doc);
    const chains = [0, 1, 2];
    for (let i = 0; i < 20; i++) {
      const answering = vm.session.pending !== null;
      let after: SessionDoc;
      if (answering) {
        vm.composer.clear();
        for (const v of vm.session.pending!.vertices ?? []) {
          vm.composer.toggleVertex(vm.composer.side!, v);
        }
        after = await api.postAnswer(doc.id, vm.composer.buildAnswer());
      } else {
        vm.composer.clear();
        vm.composer.pickSide(i % 4 < 2 ? "G" : "H");
        vm.composer.pickColour(i % 2);
        for (const v of chains.slice(0, 1 + (i % 3))) {
          vm.composer.toggleVertex(vm.composer.activeSide!, v);
        }
        after = await api.postMove(doc.id, vm.composer.buildMove());
      }
      vm.apply(after);
      const fetched = await api.getSession(doc.id);
      expect(vm.session).toEqual(fetched); // deep equality with server state
      expect(vm.session.status.state).toBe("live"); // mirrored play survives
    }
    expect(vm.roundCounter()).toBe(10);
  }, 120_000);

  it("client-side locks mirror server rules exactly", async () => {
    const doc = await api.createSession({
      g: { example: "fig1_g" },
      h: { example: "fig1_h" },
      colours: 2,
      human_role: "both",
    });
    const vm = BoardViewModel.fromSession(doc);
    vm.composer.pickColour(1);
    vm.composer.pickSide("G");
    vm.composer.toggleVertex("G", 0);
    const after = await api.postMove(doc.id, vm.composer.buildMove());
    vm.apply(after);

    // answering: the composer locks side H ... which is side G's opposite
    expect(vm.composer.answering).toBe(true);
    expect(vm.composer.side).toBe("H");
    expect(() => vm.composer.toggleVertex("G", 1)).toThrow(ComposerError);
    expect(() => vm.composer.pickColour(0)).toThrow(ComposerError);
    // what the client blocks, the server also rejects
    await expect(
      api.postMove(doc.id, { type: "colour", side: "H", colour: 0, vertices: [] }),
    ).rejects.toThrowError(ApiError);
    // and what the client allows, the server accepts
    vm.composer.toggleVertex("H", 3);
    const committed = await api.postAnswer(doc.id, vm.composer.buildAnswer());
    expect(committed.round).toBe(1);
  }, 60_000);

  it("rendering is deterministic and reflects palettes", async () => {
    const doc = await api.createSession({
      g: { example: "fig4" },
      h: { example: "fig5" },
      colours: 2,
      human_role: "both",
    });
    const vm = BoardViewModel.fromSession(doc);
    expect(graphSeed(vm.session.g)).toBe(graphSeed(vm.session.g));
    const layout1 = forceLayout(vm.session.g);
    const layout2 = forceLayout(vm.session.g);
    expect(layout1).toEqual(layout2);
    const svg = renderSide(vm.side("G"), layout1);
    expect(svg).toContain('data-side="G"');
    expect((svg.match(/class="vertex"/g) ?? []).length).toBe(7);

    await api.postMove(doc.id, {
      type: "colour",
      side: "H",
      colour: 0,
      vertices: [1, 2, 3],
    });
    // palettes appear once the round commits
    const after = await api.postAnswer(doc.id, { vertices: [1, 2, 3] });
    vm.apply(after);
    const svgH = renderSide(vm.side("H"), forceLayout(vm.session.h));
    expect((svgH.match(/class="chip"/g) ?? []).length).toBe(3);
    expect(renderBanners(vm.banners())).toBe("");
  }, 60_000);

  it("describes every trigger kind", () => {
    expect(describeTrigger({ kind: "C1", witness: { palette: [0], nonempty_side: "H" } })).toContain("H");
    expect(describeTrigger({ kind: "PEBBLE", witness: { reason: "edge" } })).toContain("edge");
  });
});
