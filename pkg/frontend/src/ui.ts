// DOM rendering. Everything here is presentation: state decisions live in
// model.ts and all displayed numbers come from server responses.

import {
  AmplitudeRow,
  RiddleLane,
  Selection,
  cardsLeft,
  coopProgress,
  legalNextTargets,
  outcomeLabel,
  parseAmplitudeRow,
  playableCards,
  scoreboardRows,
} from "./model.js";
import type { MoveBody, PlayerView, RiddleSummary, ScoreBody } from "./types.js";

type Child = Node | string | null | undefined;

export function h(
  tag: string,
  attrs: Record<string, string | boolean | ((ev: Event) => void)> = {},
  ...children: Child[]
): HTMLElement {
  const el = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (typeof value === "function") {
      el.addEventListener(key.replace(/^on/, ""), value);
    } else if (typeof value === "boolean") {
      if (value) el.setAttribute(key, "");
    } else {
      el.setAttribute(key, value);
    }
  }
  for (const child of children) {
    if (child == null) continue;
    el.append(child instanceof Node ? child : document.createTextNode(child));
  }
  return el;
}

function amplitudePanel(title: string, lines: string[]): HTMLElement {
  const rows = lines.map(parseAmplitudeRow);
  return h(
    "div",
    { class: "amplitudes" },
    h("h3", {}, title),
    ...rows.map((row: AmplitudeRow) =>
      h(
        "div",
        { class: "amp-row" },
        h("code", {}, row.text),
        h(
          "div",
          { class: "amp-bar-track" },
          h("div", {
            class: "amp-bar",
            style: `width: ${Math.round(row.prob * 100)}%`,
          }),
        ),
      ),
    ),
  );
}

export interface LobbyHandlers {
  onCreate: (config: {
    version: "easy" | "2d" | "3d";
    style: "competitive" | "cooperative";
    num_players: number;
    num_rounds: number;
    hand_size: number;
    seed?: number;
  }) => void;
  onShowRiddles: () => void;
}

export function renderLobby(root: HTMLElement, handlers: LobbyHandlers): void {
  const version = h("select", { id: "version" },
    h("option", { value: "easy" }, "easy (2 levels, no phase cards)"),
    h("option", { value: "2d" }, "2d (qubits with phases)"),
    h("option", { value: "3d", selected: true }, "3d (qutrits, full set)"),
  ) as HTMLSelectElement;
  const style = h("select", { id: "style" },
    h("option", { value: "competitive", selected: true }, "competitive"),
    h("option", { value: "cooperative" }, "cooperative"),
  ) as HTMLSelectElement;
  const players = h("input", { id: "players", type: "number", min: "2", max: "5", value: "2" }) as HTMLInputElement;
  const rounds = h("input", { id: "rounds", type: "number", min: "1", value: "3" }) as HTMLInputElement;
  const hand = h("input", { id: "hand", type: "number", min: "1", value: "5" }) as HTMLInputElement;
  const seed = h("input", { id: "seed", type: "number", placeholder: "random" }) as HTMLInputElement;

  root.replaceChildren(
    h("div", { class: "lobby" },
      h("h1", {}, "quditgame"),
      h("p", {}, "Program a shared quantum state by playing cards; highest measured value wins."),
      h("div", { class: "form" },
        h("label", {}, "version ", version),
        h("label", {}, "mode ", style),
        h("label", {}, "players ", players),
        h("label", {}, "rounds ", rounds),
        h("label", {}, "hand size ", hand),
        h("label", {}, "seed ", seed),
      ),
      h("div", { class: "actions" },
        h("button", {
          class: "primary",
          onclick: () => {
            const config = {
              version: version.value as "easy" | "2d" | "3d",
              style: style.value as "competitive" | "cooperative",
              num_players: Number(players.value),
              num_rounds: Number(rounds.value),
              hand_size: Number(hand.value),
              ...(seed.value === "" ? {} : { seed: Number(seed.value) }),
            };
            handlers.onCreate(config);
          },
        }, "Create game"),
        h("button", { onclick: () => handlers.onShowRiddles() }, "Riddles"),
      ),
      h("div", { id: "lobby-error", class: "error" }),
    ),
  );
}

export function renderJoinLinks(
  root: HTMLElement,
  links: { player: number; url: string }[],
  onEnter: (player: number) => void,
): void {
  root.replaceChildren(
    h("div", { class: "join-links" },
      h("h2", {}, "Share these links, one per player"),
      ...links.map(({ player, url }) =>
        h("div", { class: "join-row" },
          h("span", {}, `player ${player}: `),
          h("input", { value: url, readonly: true, onclick: (ev: Event) => (ev.target as HTMLInputElement).select() }),
          h("button", { onclick: () => onEnter(player) }, "play here"),
        ),
      ),
    ),
  );
}

export interface GameHandlers {
  onSelectCard: (card: string) => void;
  onSelectTarget: (qudit: number) => void;
  onClearSelection: () => void;
  onEvaluate: () => void;
}

export function renderGame(
  root: HTMLElement,
  view: PlayerView,
  selection: Selection,
  handlers: GameHandlers,
  error: string | null,
): void {
  const yourTurn = view.phase === "in-round" && view.turn === view.player_id;
  const cards = playableCards(view);
  const targets = legalNextTargets(view, selection);

  const header = h("div", { class: "game-header" },
    h("h2", {}, `round ${view.round} of ${view.config.num_rounds}`),
    h("span", { class: "badge" }, view.config.version),
    h("span", { class: "badge" }, view.config.style),
    h("span", { class: `phase ${view.phase}` },
      view.phase === "in-round"
        ? (yourTurn ? "your turn" : `player ${view.turn} to move`)
        : view.phase,
    ),
  );

  const lanes = h("div", { class: "lanes" },
    ...view.players.map((p) => {
      const targetable = selection.card !== null && targets.includes(p.id);
      return h("div", {
        class: `lane${p.is_you ? " you" : ""}${targetable ? " targetable" : ""}`,
        onclick: () => { if (targetable) handlers.onSelectTarget(p.id); },
      },
        h("div", { class: "lane-name" }, `player ${p.id}${p.is_you ? " (you)" : ""}`),
        h("div", { class: "carry" }, `|${p.carry_value}>`),
        h("div", { class: "hand-size" }, `${p.hand_size} cards`),
      );
    }),
  );

  const hand = h("div", { class: "hand" },
    h("h3", {}, "your hand"),
    ...view.your_hand.map((card) => {
      const playable = yourTurn && cards.includes(card);
      return h("button", {
        class: `card${selection.card === card ? " selected" : ""}`,
        disabled: !playable,
        onclick: () => handlers.onSelectCard(card),
      }, card);
    }),
  );

  const selectionLine = selection.card
    ? h("div", { class: "selection" },
        `${selection.card} on ${selection.targets.map((t) => `qudit ${t}`).join(", ") || "..."}`,
        h("button", { onclick: () => handlers.onClearSelection() }, "cancel"),
      )
    : null;

  const circuit = h("div", { class: "circuit" },
    h("h3", {}, "cards played this round"),
    view.round_circuit.length
      ? h("ol", {}, ...view.round_circuit.map((op) =>
          h("li", {}, `player ${op.player}: ${op.card} ${op.targets.join(" ")}`)))
      : h("p", { class: "muted" }, "none yet"),
    ...view.steals.map((s) =>
      h("p", { class: "muted" },
        `player ${s.player} stole from player ${s.victim}` +
        ("card" in s && s.card ? ` (${s.card})` : "") + ` in round ${s.round}`),
    ),
  );

  const panels: HTMLElement[] = [];
  if (view.state_lines && view.phase !== "finished") {
    panels.push(amplitudePanel("current state", view.state_lines));
  }
  if (view.phase === "between-rounds") {
    panels.push(h("div", { class: "evaluate" },
      h("button", { class: "primary", onclick: () => handlers.onEvaluate() }, "Evaluate round"),
    ));
  }
  if (view.last_result) {
    panels.push(h("div", { class: "result" },
      h("h3", {}, `round ${view.last_result.round} result`),
      amplitudePanel("state before measurement", view.last_result.state_lines),
      h("p", {}, "measured ", h("strong", {}, outcomeLabel(view.last_result.outcome))),
      h("p", {}, "carried values: " +
        Object.entries(view.last_result.carries)
          .map(([pid, v]) => `p${pid}=${v}`).join("  ")),
    ));
  }
  if (view.score) {
    panels.push(renderScore(view.score));
  }

  root.replaceChildren(
    h("div", { class: "game" },
      header,
      lanes,
      hand,
      selectionLine,
      circuit,
      ...panels,
      h("div", { class: "error" }, error ?? ""),
    ),
  );
}

export function renderScore(score: ScoreBody): HTMLElement {
  const rows = scoreboardRows(score);
  const board = h("table", { class: "scoreboard" },
    h("tr", {}, h("th", {}, "player"), h("th", {}, "value"), h("th", {}, "")),
    ...rows.map((r) =>
      h("tr", { class: r.winner ? "winner" : "" },
        h("td", {}, `player ${r.player}`),
        h("td", {}, String(r.carry)),
        h("td", {}, r.winner ? "winner" : ""),
      ),
    ),
  );
  const extras: HTMLElement[] = [];
  if (score.style === "cooperative") {
    const { total, max, ratio } = coopProgress(score);
    extras.push(
      h("p", {}, `group score ${total} of ${max}`),
      h("div", { class: "amp-bar-track" },
        h("div", { class: "amp-bar coop", style: `width: ${Math.round(ratio * 100)}%` }),
      ),
    );
  }
  return h("div", { class: "final" }, h("h3", {}, "final scoreboard"), board, ...extras);
}

export interface RiddleHandlers {
  onPick: (riddle: RiddleSummary) => void;
  onAddCard: (card: string) => void;
  onTarget: (qudit: number) => void;
  onUndo: () => void;
  onReset: () => void;
  onCheck: () => void;
  onHint: () => void;
  onBack: () => void;
}

export function renderRiddleList(
  root: HTMLElement,
  riddles: RiddleSummary[],
  handlers: Pick<RiddleHandlers, "onPick" | "onBack">,
): void {
  root.replaceChildren(
    h("div", { class: "riddles" },
      h("h2", {}, "riddles"),
      ...riddles.map((r) =>
        h("div", { class: "riddle-row", onclick: () => handlers.onPick(r) },
          h("span", { class: `badge ${r.difficulty}` }, r.difficulty),
          h("strong", {}, `#${r.id}`),
          h("span", {}, ` ${r.goal} `),
          h("span", { class: "muted" },
            `(d=${r.dim}, ${r.num_qudits} qudit${r.num_qudits > 1 ? "s" : ""}, ` +
            `up to ${r.max_cards} cards)`),
        ),
      ),
      h("button", { onclick: () => handlers.onBack() }, "back"),
    ),
  );
}

export interface RiddlePanelState {
  lane: RiddleLane;
  pendingCard: string | null;
  pendingTargets: number[];
  result: { solved: boolean; state_lines: string[]; explanation?: string } | null;
  hintText: string | null;
  error: string | null;
}

export function renderRiddleLane(
  root: HTMLElement,
  state: RiddlePanelState,
  handlers: RiddleHandlers,
): void {
  const { lane, pendingCard, pendingTargets } = state;
  const left = cardsLeft(lane);
  const needed = pendingCard === null ? 0 : (pendingCard === "CX" ? 2 : 1);

  root.replaceChildren(
    h("div", { class: "riddle-lane" },
      h("h2", {}, `riddle #${lane.riddle.id} (${lane.riddle.difficulty})`),
      h("p", {}, lane.riddle.goal),
      h("p", { class: "muted" },
        `start |${lane.riddle.initial.join(",")}>, at most ${lane.riddle.max_cards} cards`),
      h("div", { class: "palette" },
        ...Object.entries(left).sort().map(([card, count]) =>
          h("button", {
            class: `card${pendingCard === card ? " selected" : ""}`,
            disabled: count <= 0,
            onclick: () => handlers.onAddCard(card),
          }, `${card} x${count}`),
        ),
      ),
      pendingCard
        ? h("div", { class: "selection" },
            `${pendingCard}: pick ${needed - pendingTargets.length} more target(s) `,
            ...Array.from({ length: lane.riddle.num_qudits }, (_, i) =>
              h("button", { onclick: () => handlers.onTarget(i + 1) }, `qudit ${i + 1}`)),
          )
        : null,
      h("ol", { class: "lane-moves" },
        ...lane.moves.map((m) => h("li", {}, `${m.card} ${m.targets.join(" ")}`)),
      ),
      h("div", { class: "actions" },
        h("button", { onclick: () => handlers.onUndo() }, "undo"),
        h("button", { onclick: () => handlers.onReset() }, "reset"),
        h("button", { class: "primary", onclick: () => handlers.onCheck() }, "check"),
        h("button", { onclick: () => handlers.onHint() }, "hint"),
        h("button", { onclick: () => handlers.onBack() }, "back"),
      ),
      state.hintText ? h("p", { class: "hint" }, state.hintText) : null,
      state.result
        ? h("div", { class: `result ${state.result.solved ? "ok" : "nope"}` },
            h("h3", {}, state.result.solved ? "solved!" : "not solved"),
            amplitudePanel("final state", state.result.state_lines),
            state.result.explanation ? h("p", { class: "explanation" }, state.result.explanation) : null,
          )
        : null,
      h("div", { class: "error" }, state.error ?? ""),
    ),
  );
}
