// App wiring: URL params decide the screen (lobby, game via ?game&token,
// riddles via #riddles); game views poll the server once a second.

import { ApiClient, ApiError } from "./api.js";
import {
  RiddleLane,
  Selection,
  addLaneMove,
  asMove,
  emptySelection,
  isComplete,
  joinLink,
  moveAllowed,
  newLane,
  requiredTargets,
  selectCard,
  selectTarget,
  undoLaneMove,
} from "./model.js";
import type { MoveBody, PlayerView, RiddleSummary } from "./types.js";
import {
  renderGame,
  renderJoinLinks,
  renderLobby,
  renderRiddleLane,
  renderRiddleList,
} from "./ui.js";

const root = document.getElementById("app")!;
const api = new ApiClient("");

function describeError(err: unknown): string {
  if (err instanceof ApiError) {
    const where = err.path ? ` (${err.path})` : err.line ? ` (line ${err.line})` : "";
    return `${err.message}${where}`;
  }
  return String(err);
}

// --- game screen ---------------------------------------------------------------

class GameScreen {
  private view: PlayerView | null = null;
  private selection: Selection = emptySelection;
  private error: string | null = null;
  private lastRendered = "";
  private timer: number | null = null;

  constructor(private gameId: string, private token: string) {}

  async start(): Promise<void> {
    await this.refresh();
    this.timer = window.setInterval(() => void this.refresh(), 1000);
  }

  private async refresh(): Promise<void> {
    try {
      this.view = await api.getState(this.gameId, this.token);
      if (this.view.phase === "finished" && this.timer !== null) {
        window.clearInterval(this.timer);
        this.timer = null;
      }
    } catch (err) {
      this.error = describeError(err);
    }
    this.render();
  }

  private render(): void {
    if (!this.view) {
      root.replaceChildren(document.createTextNode(this.error ?? "loading..."));
      return;
    }
    const key = JSON.stringify([this.view, this.selection, this.error]);
    if (key === this.lastRendered) return;
    this.lastRendered = key;
    renderGame(root, this.view, this.selection, {
      onSelectCard: (card) => {
        this.selection = selectCard(this.selection, card);
        this.maybePlay();
      },
      onSelectTarget: (qudit) => {
        this.selection = selectTarget(this.selection, qudit);
        this.maybePlay();
      },
      onClearSelection: () => {
        this.selection = emptySelection;
        this.render();
      },
      onEvaluate: () => void this.evaluate(),
    }, this.error);
  }

  private maybePlay(): void {
    const move = asMove(this.selection);
    if (!move || !this.view) {
      this.render();
      return;
    }
    if (!moveAllowed(this.view, move)) {
      this.error = "that move is not allowed right now";
      this.selection = emptySelection;
      this.render();
      return;
    }
    void this.play(move);
  }

  private async play(move: MoveBody): Promise<void> {
    try {
      this.view = await api.play(this.gameId, this.token, move);
      this.error = null;
    } catch (err) {
      this.error = describeError(err); // server rejections handled gracefully
    }
    this.selection = emptySelection;
    this.render();
  }

  private async evaluate(): Promise<void> {
    try {
      const result = await api.evaluateRound(this.gameId, this.token);
      this.view = result.view;
      this.error = null;
    } catch (err) {
      this.error = describeError(err);
    }
    this.render();
  }
}

// --- riddle screen ----------------------------------------------------------------

class RiddleScreen {
  private lane: RiddleLane | null = null;
  private pendingCard: string | null = null;
  private pendingTargets: number[] = [];
  private result: { solved: boolean; state_lines: string[]; explanation?: string } | null = null;
  private hintText: string | null = null;
  private error: string | null = null;

  async start(): Promise<void> {
    const { riddles } = await api.listRiddles();
    this.renderList(riddles);
  }

  private renderList(riddles: RiddleSummary[]): void {
    renderRiddleList(root, riddles, {
      onPick: (riddle) => {
        this.lane = newLane(riddle);
        this.result = null;
        this.hintText = null;
        this.error = null;
        this.render();
      },
      onBack: () => {
        window.location.hash = "";
        void boot();
      },
    });
  }

  private render(): void {
    if (!this.lane) return;
    renderRiddleLane(root, {
      lane: this.lane,
      pendingCard: this.pendingCard,
      pendingTargets: this.pendingTargets,
      result: this.result,
      hintText: this.hintText,
      error: this.error,
    }, {
      onPick: () => undefined,
      onAddCard: (card) => {
        this.pendingCard = card;
        this.pendingTargets = [];
        if (this.lane!.riddle.num_qudits === 1 && requiredTargets(card) === 1) {
          this.commitPending(1);
          return;
        }
        this.render();
      },
      onTarget: (qudit) => this.commitPending(qudit),
      onUndo: () => {
        this.lane = undoLaneMove(this.lane!);
        this.result = null;
        this.render();
      },
      onReset: () => {
        this.lane = newLane(this.lane!.riddle);
        this.result = null;
        this.hintText = null;
        this.render();
      },
      onCheck: () => void this.check(),
      onHint: () => void this.hint(),
      onBack: () => void this.start(),
    });
  }

  private commitPending(qudit: number): void {
    if (!this.pendingCard || !this.lane) return;
    this.pendingTargets.push(qudit);
    if (this.pendingTargets.length === requiredTargets(this.pendingCard)) {
      this.lane = addLaneMove(this.lane, {
        card: this.pendingCard,
        targets: [...this.pendingTargets],
      });
      this.pendingCard = null;
      this.pendingTargets = [];
      this.result = null;
    }
    this.render();
  }

  private async check(): Promise<void> {
    if (!this.lane) return;
    try {
      const outcome = await api.attemptRiddle(this.lane.riddle.id, this.lane.moves);
      this.result = outcome;
      this.error = null;
    } catch (err) {
      this.error = describeError(err);
    }
    this.render();
  }

  private async hint(): Promise<void> {
    if (!this.lane) return;
    try {
      const response = await api.hintRiddle(this.lane.riddle.id, this.lane.moves);
      if (response.solved) {
        this.hintText = "already solved: press check";
      } else if (response.move) {
        this.hintText = `try ${response.move.card} on qudit ${response.move.targets.join(", ")}`;
      } else {
        this.hintText = "no completion from here: undo or reset";
      }
      this.error = null;
    } catch (err) {
      this.error = describeError(err);
    }
    this.render();
  }
}

// --- lobby ---------------------------------------------------------------------------

async function createGame(config: Parameters<ApiClient["createGame"]>[0]): Promise<void> {
  try {
    const created = await api.createGame(config);
    const links = Object.entries(created.tokens)
      .map(([pid, token]) => ({
        player: Number(pid),
        url: joinLink(window.location.href.split(/[?#]/)[0], created.game_id, token),
      }))
      .sort((a, b) => a.player - b.player);
    renderJoinLinks(root, links, (player) => {
      const token = created.tokens[String(player)];
      const url = new URL(window.location.href);
      url.searchParams.set("game", created.game_id);
      url.searchParams.set("token", token);
      window.history.pushState({}, "", url);
      void boot();
    });
  } catch (err) {
    const box = document.getElementById("lobby-error");
    if (box) box.textContent = describeError(err);
  }
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const gameId = params.get("game");
  const token = params.get("token");
  if (gameId && token) {
    await new GameScreen(gameId, token).start();
    return;
  }
  if (window.location.hash === "#riddles") {
    await new RiddleScreen().start();
    return;
  }
  renderLobby(root, {
    onCreate: (config) => void createGame(config),
    onShowRiddles: () => {
      window.location.hash = "#riddles";
      void new RiddleScreen().start();
    },
  });
}

void boot();
