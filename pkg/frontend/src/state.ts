/** Explorer state: capability filters plus the selected explainer.
 *
 * The filtered set is always a subset of the archive's scorecards, and the
 * selection resets whenever the filters hide it. State serializes into a URL
 * hash so filter -> scatter -> detail navigation survives browser history.
 */

import type { Archive, Scorecard } from "./types.js";
import { CATEGORIES, MODEL_KINDS } from "./types.js";

export type KindFilter = "any" | "agnostic" | (typeof MODEL_KINDS)[number];
export type OutputFilter = "any" | "importance" | "attribution";

export interface Filters {
	kind: KindFilter;
	output: OutputFilter;
	categoryMin: Partial<Record<string, number>>;
}

export interface ExplorerState {
	archive: Archive;
	filters: Filters;
	selected: string | null;
}

export function defaultFilters(): Filters {
	return { kind: "any", output: "any", categoryMin: {} };
}

export function initialState(archive: Archive): ExplorerState {
	return { archive, filters: defaultFilters(), selected: null };
}

function matchesKind(card: Scorecard, kind: KindFilter): boolean {
	if (kind === "any") return true;
	if (kind === "agnostic") return card.supported_models.length === MODEL_KINDS.length;
	return card.supported_models.includes(kind);
}

function matchesOutput(card: Scorecard, output: OutputFilter): boolean {
	return output === "any" || card.outputs.includes(output);
}

function matchesMinimums(card: Scorecard, minimums: Filters["categoryMin"]): boolean {
	for (const [category, minimum] of Object.entries(minimums)) {
		if (minimum === undefined || minimum <= 0) continue;
		const value = card.categories[category];
		if (value === undefined || value < minimum) return false;
	}
	return true;
}

export function filteredCards(state: ExplorerState): Scorecard[] {
	return state.archive.scorecards.filter(
		(card) =>
			matchesKind(card, state.filters.kind) &&
			matchesOutput(card, state.filters.output) &&
			matchesMinimums(card, state.filters.categoryMin),
	);
}

/** Apply new filters; drop the selection if it falls out of the subset. */
export function withFilters(state: ExplorerState, filters: Filters): ExplorerState {
	const next: ExplorerState = { ...state, filters };
	const visible = new Set(filteredCards(next).map((c) => c.explainer));
	return { ...next, selected: state.selected && visible.has(state.selected) ? state.selected : null };
}

export function withSelection(state: ExplorerState, explainer: string | null): ExplorerState {
	if (explainer === null) return { ...state, selected: null };
	const visible = new Set(filteredCards(state).map((c) => c.explainer));
	return { ...state, selected: visible.has(explainer) ? explainer : null };
}

/** Encode filters + selection as a URL hash fragment (no leading '#'). */
export function encodeHash(state: ExplorerState): string {
	const params = new URLSearchParams();
	if (state.filters.kind !== "any") params.set("kind", state.filters.kind);
	if (state.filters.output !== "any") params.set("output", state.filters.output);
	for (const category of CATEGORIES) {
		const minimum = state.filters.categoryMin[category];
		if (minimum !== undefined && minimum > 0) params.set(`min_${category}`, String(minimum));
	}
	if (state.selected) params.set("selected", state.selected);
	return params.toString();
}

export function decodeHash(hash: string): { filters: Filters; selected: string | null } {
	const params = new URLSearchParams(hash.replace(/^#/, ""));
	const filters = defaultFilters();
	const kind = params.get("kind");
	if (kind && (kind === "agnostic" || (MODEL_KINDS as readonly string[]).includes(kind))) {
		filters.kind = kind as KindFilter;
	}
	const output = params.get("output");
	if (output === "importance" || output === "attribution") filters.output = output;
	for (const category of CATEGORIES) {
		const raw = params.get(`min_${category}`);
		if (raw !== null) {
			const value = Number(raw);
			if (Number.isFinite(value) && value > 0) filters.categoryMin[category] = value;
		}
	}
	return { filters, selected: params.get("selected") };
}
