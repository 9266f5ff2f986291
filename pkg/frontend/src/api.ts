// Typed fetch wrapper for the /v1 service. The base URL and fetch function
// are injectable so tests can point it at a spawned server or a stub.

import type {
  AttemptResponse,
  CreateGameResponse,
  ErrorBody,
  EvaluateResponse,
  GameConfigBody,
  HintResponse,
  MoveBody,
  PlayerView,
  RiddleSummary,
  SandboxResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly path?: string,
    readonly line?: number,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseError(resp: Response): Promise<never> {
  let body: { error?: ErrorBody } = {};
  try {
    body = await resp.json();
  } catch {
    // non-JSON error body; fall through to a generic error
  }
  const err = body.error ?? { code: "http-error", message: `HTTP ${resp.status}` };
  throw new ApiError(resp.status, err.code, err.message, err.path, err.line);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}/v1${path}`);
    if (!resp.ok) await parseError(resp);
    return (await resp.json()) as T;
  }

  private async getText(path: string): Promise<string> {
    const resp = await this.fetchFn(`${this.baseUrl}/v1${path}`);
    if (!resp.ok) await parseError(resp);
    return resp.text();
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}/v1${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!resp.ok) await parseError(resp);
    return (await resp.json()) as T;
  }

  createGame(config: GameConfigBody): Promise<CreateGameResponse> {
    return this.post("/games", config);
  }

  getState(gameId: string, token: string): Promise<PlayerView> {
    return this.get(`/games/${gameId}/state?token=${encodeURIComponent(token)}`);
  }

  play(gameId: string, token: string, move: MoveBody): Promise<PlayerView> {
    return this.post(`/games/${gameId}/play`, { token, move });
  }

  evaluateRound(gameId: string, token: string): Promise<EvaluateResponse> {
    return this.post(`/games/${gameId}/evaluate`, { token });
  }

  getLog(gameId: string, token: string): Promise<string> {
    return this.getText(`/games/${gameId}/log?token=${encodeURIComponent(token)}`);
  }

  listRiddles(): Promise<{ riddles: RiddleSummary[] }> {
    return this.get("/riddles");
  }

  attemptRiddle(riddleId: number, moves: MoveBody[]): Promise<AttemptResponse> {
    return this.post(`/riddles/${riddleId}/attempt`, { moves });
  }

  hintRiddle(riddleId: number, moves: MoveBody[]): Promise<HintResponse> {
    return this.post(`/riddles/${riddleId}/hint`, { moves });
  }

  sandboxEvaluate(circuit: string, shots?: number, seed?: number): Promise<SandboxResponse> {
    return this.post("/sandbox/evaluate", { circuit, shots, seed });
  }
}
