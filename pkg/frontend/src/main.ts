/** Browser wiring: one in-flight request at a time, view state refreshed
 * from every API response, hint overlay on demand. */
import { SeuratApi, type SessionDoc } from "./api.js";
import { forceLayout } from "./layout.js";
import { BoardViewModel, ComposerError } from "./model.js";
import { renderBanners, renderSide } from "./render.js";

export class Playboard {
  private vm: BoardViewModel | null = null;
  private inflight = false;

  constructor(
    private api: SeuratApi,
    private root: {
      board: HTMLElement;
      banners: HTMLElement;
      hints: HTMLElement;
      status: HTMLElement;
    },
  ) {}

  async load(sessionId: string): Promise<void> {
    try {
      const doc = await this.api.getSession(sessionId);
      this.vm = BoardViewModel.fromSession(doc);
      this.draw([]);
    } catch (err) {
      this.root.board.innerHTML = `<p class="empty">no such session</p>`;
      throw err;
    }
  }

  private draw(repainted: string[]): void {
    if (!this.vm) return;
    const g = this.vm.side("G");
    const h = this.vm.side("H");
    this.root.board.innerHTML =
      renderSide(g, forceLayout(this.vm.session.g)) +
      renderSide(h, forceLayout(this.vm.session.h));
    this.root.banners.innerHTML = renderBanners(this.vm.banners());
    const s = this.vm.session;
    this.root.status.textContent =
      `round ${s.round} | ${s.status.state}` +
      (s.your_turn ? ` | your ${s.turn_half} half` : " | engine thinking");
    for (const key of repainted) {
      const [side, v] = key.split(":");
      const el = this.root.board.querySelector(
        `circle[data-side="${side}"][data-vertex="${v}"]`,
      );
      el?.classList.add("repainted");
    }
    this.attachClicks();
  }

  private attachClicks(): void {
    this.root.board.querySelectorAll("circle.vertex").forEach((el) => {
      el.addEventListener("click", () => {
        if (!this.vm) return;
        const side = el.getAttribute("data-side") as "G" | "H";
        const v = Number(el.getAttribute("data-vertex"));
        try {
          this.vm.composer.toggleVertex(side, v);
          this.draw([]);
        } catch (err) {
          if (err instanceof ComposerError) this.flash(err.message);
          else throw err;
        }
      });
    });
  }

  flash(message: string): void {
    this.root.status.textContent = message;
  }

  async submit(): Promise<void> {
    if (!this.vm || this.inflight) return;
    const composer = this.vm.composer;
    this.inflight = true;
    try {
      let doc: SessionDoc;
      if (composer.answering) {
        doc = await this.api.postAnswer(this.vm.session.id, composer.buildAnswer());
      } else {
        doc = await this.api.postMove(this.vm.session.id, composer.buildMove());
      }
      const diff = this.vm.apply(doc);
      this.draw(diff);
    } catch (err) {
      this.flash(String(err));
    } finally {
      this.inflight = false;
    }
  }

  async showHints(depth?: number): Promise<void> {
    if (!this.vm) return;
    const doc = await this.api.getHint(this.vm.session.id, depth);
    const rows = doc.hints
      .slice(0, 10)
      .map((hh) => {
        const what = hh.move ? JSON.stringify(hh.move) : JSON.stringify(hh.answer);
        const ev = JSON.stringify(hh.eval);
        const grey = (hh.eval as { winning?: boolean }).winning === undefined;
        return `<li class="${grey ? "unknown" : ""}"><code>${what}</code> ${ev}</li>`;
      })
      .join("");
    this.root.hints.innerHTML =
      `<p>provenance: ${doc.provenance}</p><ol>${rows}</ol>`;
  }
}

export function mount(base: string, sessionId: string): Playboard {
  const api = new SeuratApi(base);
  const board = new Playboard(api, {
    board: document.getElementById("board")!,
    banners: document.getElementById("banners")!,
    hints: document.getElementById("hints")!,
    status: document.getElementById("status")!,
  });
  void board.load(sessionId);
  return board;
}
