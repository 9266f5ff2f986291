// Wire types mirroring the /v1 service JSON. The client renders these
// verbatim and never derives quantum state on its own.

export interface MoveBody {
  card: string;
  targets: number[];
}

export interface GameConfigBody {
  version: "easy" | "2d" | "3d";
  style: "competitive" | "cooperative";
  num_players: number;
  num_rounds?: number;
  hand_size?: number;
  seed?: number;
}

export interface CreateGameResponse {
  game_id: string;
  tokens: Record<string, string>; // player id -> token
  num_players: number;
}

export interface PlayerRow {
  id: number;
  hand_size: number;
  carry_value: number;
  is_you: boolean;
}

export interface StealRow {
  round: number;
  player: number;
  victim: number;
  card?: string | null; // present only for the two involved players
}

export interface CircuitRow {
  player: number;
  card: string;
  targets: number[];
}

export interface ScoreBody {
  style: string;
  carries: Record<string, number>;
  winners?: number[];
  total?: number;
  max_total?: number;
}

export interface RoundResult {
  round: number;
  state_lines: string[];
  state_text: string;
  outcome: number[];
  carries: Record<string, number>;
}

export interface PlayerView {
  game_id: string;
  player_id: number;
  phase: "in-round" | "between-rounds" | "finished";
  turn: number;
  round: number;
  config: {
    version: string;
    style: string;
    dim: number;
    num_players: number;
    num_rounds: number;
    hand_size: number;
    reveal_state: boolean;
  };
  your_hand: string[];
  players: PlayerRow[];
  round_circuit: CircuitRow[];
  steals: StealRow[];
  legal_moves: MoveBody[];
  last_result: RoundResult | null;
  state_lines?: string[];
  state_text?: string;
  score?: ScoreBody;
}

export interface EvaluateResponse extends RoundResult {
  phase: string;
  score?: ScoreBody;
  view: PlayerView;
}

export interface RiddleSummary {
  id: number;
  dim: number;
  num_qudits: number;
  initial: number[];
  cards: Record<string, number>;
  max_cards: number;
  difficulty: string;
  goal: string;
}

export interface AttemptResponse {
  riddle_id: number;
  solved: boolean;
  state_lines: string[];
  state_text: string;
  explanation?: string;
}

export interface HintResponse {
  riddle_id: number;
  solved: boolean;
  move: MoveBody | null;
}

export interface SandboxResponse {
  dim: number;
  num_qudits: number;
  state_lines: string[];
  state_text: string;
  shots?: number;
  histogram?: { values: number[]; count: number }[];
}

export interface ErrorBody {
  code: string;
  message: string;
  path?: string;
  line?: number;
}
