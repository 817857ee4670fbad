import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { parseArchive } from "./archive.js";
import {
	decodeHash,
	defaultFilters,
	encodeHash,
	filteredCards,
	initialState,
	withFilters,
	withSelection,
} from "./state.js";

const archive = parseArchive(
	readFileSync(new URL("../testdata/results.json", import.meta.url), "utf8"),
);

const TREE_ONLY = ["saabas", "tree_shap", "tree_shap_approximation"];

describe("capability filters", () => {
	it("starts with every explainer visible", () => {
		const state = initialState(archive);
		expect(filteredCards(state).length).toBe(archive.scorecards.length);
	});

	it("model-agnostic + global importance hides tree-only explainers", () => {
		let state = initialState(archive);
		state = withFilters(state, {
			...defaultFilters(),
			kind: "agnostic",
			output: "importance",
		});
		const visible = filteredCards(state).map((c) => c.explainer);
		for (const id of TREE_ONLY) expect(visible).not.toContain(id);
		expect(visible).toContain("kernel_shap");
		expect(visible).toContain("permutation");
	});

	it("kind filter keeps explainers supporting that model family", () => {
		let state = initialState(archive);
		state = withFilters(state, { ...defaultFilters(), kind: "tree_ensemble" });
		const visible = filteredCards(state).map((c) => c.explainer);
		for (const id of TREE_ONLY) expect(visible).toContain(id);
		expect(visible).toContain("kernel_shap"); // agnostic explainers support trees too
	});

	it("category minimums require the category to be present", () => {
		let state = initialState(archive);
		state = withFilters(state, { ...defaultFilters(), categoryMin: { stress: 1 } });
		const visible = filteredCards(state).map((c) => c.explainer);
		for (const id of TREE_ONLY) expect(visible).not.toContain(id); // no stress cell
	});

	it("filtered set is always a subset of the archive", () => {
		const all = new Set(archive.scorecards.map((c) => c.explainer));
		for (const kind of ["any", "agnostic", "mlp", "corrupted"] as const) {
			const state = withFilters(initialState(archive), { ...defaultFilters(), kind });
			for (const card of filteredCards(state)) expect(all.has(card.explainer)).toBe(true);
		}
	});
});

describe("selection", () => {
	it("selects only visible explainers", () => {
		let state = withSelection(initialState(archive), "tree_shap");
		expect(state.selected).toBe("tree_shap");
		state = withSelection(state, "not-an-explainer");
		expect(state.selected).toBeNull();
	});

	it("resets when filtered out", () => {
		let state = withSelection(initialState(archive), "tree_shap");
		state = withFilters(state, { ...defaultFilters(), kind: "agnostic" });
		expect(state.selected).toBeNull();
	});

	it("survives filters that keep it visible", () => {
		let state = withSelection(initialState(archive), "kernel_shap");
		state = withFilters(state, { ...defaultFilters(), kind: "agnostic" });
		expect(state.selected).toBe("kernel_shap");
	});
});

describe("history round trip", () => {
	it("encodes and decodes filters + selection", () => {
		let state = initialState(archive);
		state = withFilters(state, {
			kind: "agnostic",
			output: "importance",
			categoryMin: { fidelity: 50 },
		});
		state = withSelection(state, "kernel_shap");
		const hash = encodeHash(state);
		const decoded = decodeHash(hash);
		expect(decoded.filters.kind).toBe("agnostic");
		expect(decoded.filters.output).toBe("importance");
		expect(decoded.filters.categoryMin.fidelity).toBe(50);
		expect(decoded.selected).toBe("kernel_shap");
	});

	it("empty state encodes to an empty hash", () => {
		expect(encodeHash(initialState(archive))).toBe("");
		const decoded = decodeHash("");
		expect(decoded.filters).toEqual(defaultFilters());
		expect(decoded.selected).toBeNull();
	});

	it("ignores malformed hash values", () => {
		const decoded = decodeHash("#kind=bogus&output=nope&min_fidelity=-4");
		expect(decoded.filters).toEqual(defaultFilters());
	});
});
