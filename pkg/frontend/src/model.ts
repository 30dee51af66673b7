// Review view-model. The rendered state is a pure function of the service's
// session view plus the two project documents; local decision application is
// optimistic and a caller rolls back to the previous view on service error.

import type {
  DecisionEntry,
  DecisionStatus,
  MatcherScore,
  PairView,
  ProjectDocument,
  SessionView,
} from "./api.js";

export const UNNAMED = "Click to edit";

export interface MatchRow {
  source: number;
  target: number;
  sourceHeader: string;
  targetHeader: string;
  scores: Record<string, MatcherScore> | null;
  combined: number | null;
  status: DecisionStatus;
  added: boolean;
  editedTarget?: number;
}

export function headerLabel(
  doc: ProjectDocument,
  position: number,
): string {
  const header = doc.headers[position];
  return header === null || header === undefined ? UNNAMED : header;
}

export function toRows(
  view: SessionView,
  source: ProjectDocument,
  target: ProjectDocument,
): MatchRow[] {
  return view.pairs.map((pair: PairView) => {
    const row: MatchRow = {
      source: pair.source,
      target: pair.target,
      sourceHeader: headerLabel(source, pair.source),
      targetHeader: headerLabel(target, pair.target),
      scores: pair.scores,
      combined: pair.combined,
      status: pair.status,
      added: pair.added,
    };
    if (pair.edited_target !== undefined) {
      row.editedTarget = pair.edited_target;
    }
    return row;
  });
}

// a pending row may be accepted, rejected, or edited; anything else only resets
export function allowedDecisions(
  status: DecisionStatus,
): DecisionEntry["decision"][] {
  return status === "pending" ? ["accept", "reject", "edit"] : ["reset"];
}

export function validateDecision(
  view: SessionView,
  entry: DecisionEntry,
  targetColumns: number,
): string | null {
  const pair = view.pairs.find(
    (p) => p.source === entry.pair[0] && p.target === entry.pair[1],
  );
  if (!pair) return "unknown pair";
  if (!allowedDecisions(pair.status).includes(entry.decision)) {
    return `cannot ${entry.decision} a ${pair.status} pair`;
  }
  if (entry.decision === "edit") {
    const target = entry.target;
    if (
      target === undefined ||
      !Number.isInteger(target) ||
      target < 0 ||
      target >= targetColumns
    ) {
      return "edit needs an existing target column";
    }
  }
  return null;
}

// local optimistic application mirroring the service's replay semantics
export function applyDecision(
  view: SessionView,
  entry: DecisionEntry,
): SessionView {
  const pairs = view.pairs.map((pair) => {
    if (pair.source !== entry.pair[0] || pair.target !== entry.pair[1]) {
      return pair;
    }
    const next: PairView = { ...pair };
    delete next.edited_target;
    switch (entry.decision) {
      case "accept":
        next.status = "accepted";
        break;
      case "reject":
        next.status = "rejected";
        break;
      case "reset":
        next.status = "pending";
        break;
      case "edit":
        next.status = "edited";
        next.edited_target = entry.target;
        break;
    }
    return next;
  });
  return {
    ...view,
    pairs,
    decisions: [...view.decisions, entry],
  };
}

export function validateNewPair(
  view: SessionView,
  source: number,
  target: number,
  sourceColumns: number,
  targetColumns: number,
): string | null {
  if (!Number.isInteger(source) || source < 0 || source >= sourceColumns) {
    return "source column out of range";
  }
  if (!Number.isInteger(target) || target < 0 || target >= targetColumns) {
    return "target column out of range";
  }
  if (view.pairs.some((p) => p.source === source && p.target === target)) {
    return "pair already listed";
  }
  return null;
}

// pairs the merge will use: accepted ones plus edited ones at their new target
export function mergePairs(view: SessionView): [number, number][] {
  const pairs: [number, number][] = [];
  for (const pair of view.pairs) {
    if (pair.status === "accepted") {
      pairs.push([pair.source, pair.target]);
    } else if (pair.status === "edited" && pair.edited_target !== undefined) {
      pairs.push([pair.source, pair.edited_target]);
    }
  }
  pairs.sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  return pairs;
}

export function formatScore(score: MatcherScore | null | undefined): string {
  if (score === null || score === undefined) return "";
  if (score === "skipped") return "skipped";
  return score.toFixed(4);
}
