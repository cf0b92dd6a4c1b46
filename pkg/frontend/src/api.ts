/** Typed client for the /v1 HTTP API; the client is API-pure and holds no
 * game logic of its own. */

export interface GraphDoc {
  format: string;
  directed: boolean;
  n: number;
  edges: [number, number][];
  labels?: Record<string, string>;
}

export interface MoveDoc {
  type: "colour" | "pebble";
  side: "G" | "H";
  colour?: number;
  vertices?: number[];
  pair?: number;
  vertex?: number;
}

export interface TriggerDoc {
  kind: string;
  witness: Record<string, unknown>;
}

export interface SessionStatus {
  state: "live" | "won_by_forall";
  round?: number;
  triggers?: TriggerDoc[];
}

export interface RoundDoc {
  move: MoveDoc;
  answer: { vertices?: number[]; vertex?: number };
}

export interface SessionDoc {
  id: string;
  g: GraphDoc;
  h: GraphDoc;
  colours: number;
  variant: string;
  pebble_pairs: number;
  human_role: "forall" | "exists" | "both";
  engine: Record<string, unknown> | null;
  seed: number;
  round: number;
  history: RoundDoc[];
  pending: MoveDoc | null;
  status: SessionStatus;
  position: {
    palettes_g: number[][];
    palettes_h: number[][];
    pebbles_g?: (number | null)[];
    pebbles_h?: (number | null)[];
  };
  your_turn: boolean;
  turn_half: "universal" | "existential";
}

export interface HintEntry {
  move?: MoveDoc;
  answer?: { vertices?: number[]; vertex?: number };
  eval: Record<string, unknown>;
}

export interface HintDoc {
  hints: HintEntry[];
  provenance: "certified" | "heuristic";
}

export interface CreateSessionRequest {
  g: GraphDoc | { example: string };
  h: GraphDoc | { example: string };
  colours: number;
  variant?: string;
  pebble_pairs?: number;
  human_role?: string;
  engine?: Record<string, unknown> | null;
  seed?: number;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

export class SeuratApi {
  constructor(private base: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.base + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    const body = await res.json();
    if (!res.ok) {
      throw new ApiError(res.status, JSON.stringify(body.detail ?? body));
    }
    return body as T;
  }

  createSession(req: CreateSessionRequest): Promise<SessionDoc> {
    return this.request("/v1/sessions", {
      method: "POST",
      body: JSON.stringify(req),
    });
  }

  getSession(id: string): Promise<SessionDoc> {
    return this.request(`/v1/sessions/${id}`);
  }

  postMove(id: string, move: MoveDoc): Promise<SessionDoc> {
    return this.request(`/v1/sessions/${id}/moves`, {
      method: "POST",
      body: JSON.stringify({ move }),
    });
  }

  postAnswer(
    id: string,
    answer: { vertices?: number[]; vertex?: number },
  ): Promise<SessionDoc> {
    return this.request(`/v1/sessions/${id}/moves`, {
      method: "POST",
      body: JSON.stringify({ answer }),
    });
  }

  getHint(id: string, depth?: number): Promise<HintDoc> {
    const q = depth ? `?depth=${depth}` : "";
    return this.request(`/v1/sessions/${id}/hint${q}`);
  }
}
