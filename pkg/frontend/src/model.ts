// Pure view-model logic: card/target selection, legality filtering against
// the server's legal_moves, amplitude-row parsing for display bars, riddle
// lane budgeting, scoreboard shaping. No DOM, no fetch, no quantum math
// beyond squaring the server's displayed amplitude for a bar width.

import type { MoveBody, PlayerView, RiddleSummary, ScoreBody } from "./types.js";

export function requiredTargets(card: string): number {
  if (card === "CX") return 2;
  return 1; // single-qudit gates and STEAL (victim)
}

export interface Selection {
  card: string | null;
  targets: number[];
}

export const emptySelection: Selection = { card: null, targets: [] };

export function selectCard(selection: Selection, card: string): Selection {
  if (selection.card === card && selection.targets.length === 0) {
    return emptySelection; // tapping the same card again deselects
  }
  return { card, targets: [] };
}

export function selectTarget(selection: Selection, qudit: number): Selection {
  if (!selection.card) return selection;
  if (selection.targets.length >= requiredTargets(selection.card)) return selection;
  return { card: selection.card, targets: [...selection.targets, qudit] };
}

export function isComplete(selection: Selection): boolean {
  return selection.card !== null && selection.targets.length === requiredTargets(selection.card);
}

export function asMove(selection: Selection): MoveBody | null {
  return isComplete(selection) ? { card: selection.card!, targets: selection.targets } : null;
}

function sameMove(a: MoveBody, b: MoveBody): boolean {
  return a.card === b.card && a.targets.length === b.targets.length &&
    a.targets.every((t, i) => t === b.targets[i]);
}

/** Only moves the server listed as legal are ever playable. */
export function moveAllowed(view: PlayerView, move: MoveBody): boolean {
  return view.legal_moves.some((m) => sameMove(m, move));
}

/** Cards the player can start a move with right now. */
export function playableCards(view: PlayerView): string[] {
  const cards = new Set(view.legal_moves.map((m) => m.card));
  return [...cards].sort();
}

/** Valid next targets for a partial selection, per the server's move list. */
export function legalNextTargets(view: PlayerView, selection: Selection): number[] {
  if (!selection.card) return [];
  const prefixLen = selection.targets.length;
  const next = new Set<number>();
  for (const m of view.legal_moves) {
    if (m.card !== selection.card) continue;
    if (m.targets.length <= prefixLen) continue;
    if (selection.targets.every((t, i) => m.targets[i] === t)) {
      next.add(m.targets[prefixLen]);
    }
  }
  return [...next].sort((a, b) => a - b);
}

export interface AmplitudeRow {
  text: string; // the server's row, verbatim
  re: number;
  im: number;
  values: number[];
  prob: number; // |re + i im|^2 of the displayed (4-decimal) amplitude
}

const ROW_PATTERN = /^\((-?\d+\.\d{4}),(-?\d+\.\d{4})\) \|([0-9,]+)>$/;

export function parseAmplitudeRow(row: string): AmplitudeRow {
  const match = ROW_PATTERN.exec(row);
  if (!match) throw new Error(`unrecognized amplitude row: ${row}`);
  const re = Number(match[1]);
  const im = Number(match[2]);
  return {
    text: row,
    re,
    im,
    values: match[3].split(",").map(Number),
    prob: re * re + im * im,
  };
}

export function outcomeLabel(outcome: number[]): string {
  return `|${outcome.join(",")}>`;
}

export interface ScoreboardRow {
  player: number;
  carry: number;
  winner: boolean;
}

export function scoreboardRows(score: ScoreBody): ScoreboardRow[] {
  const winners = new Set(score.winners ?? []);
  return Object.entries(score.carries)
    .map(([pid, carry]) => ({ player: Number(pid), carry, winner: winners.has(Number(pid)) }))
    .sort((a, b) => a.player - b.player);
}

export function coopProgress(score: ScoreBody): { total: number; max: number; ratio: number } {
  const total = score.total ?? 0;
  const max = score.max_total ?? 1;
  return { total, max, ratio: max > 0 ? total / max : 0 };
}

export function joinLink(baseUrl: string, gameId: string, token: string): string {
  const url = new URL(baseUrl);
  url.searchParams.set("game", gameId);
  url.searchParams.set("token", token);
  return url.toString();
}

// --- riddle lane -------------------------------------------------------------

export interface RiddleLane {
  riddle: RiddleSummary;
  moves: MoveBody[];
}

export function newLane(riddle: RiddleSummary): RiddleLane {
  return { riddle, moves: [] };
}

export function cardsLeft(lane: RiddleLane): Record<string, number> {
  const left: Record<string, number> = { ...lane.riddle.cards };
  for (const move of lane.moves) {
    left[move.card] = (left[move.card] ?? 0) - 1;
  }
  return left;
}

export function canAddCard(lane: RiddleLane, card: string): boolean {
  if (lane.moves.length >= lane.riddle.max_cards) return false;
  return (cardsLeft(lane)[card] ?? 0) > 0;
}

export function addLaneMove(lane: RiddleLane, move: MoveBody): RiddleLane {
  if (!canAddCard(lane, move.card)) return lane;
  return { ...lane, moves: [...lane.moves, move] };
}

export function undoLaneMove(lane: RiddleLane): RiddleLane {
  return { ...lane, moves: lane.moves.slice(0, -1) };
}
