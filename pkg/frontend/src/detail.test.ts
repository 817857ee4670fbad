import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { parseArchive } from "./archive.js";
import { classifyExperiment, classifyScore, descriptorBlock, detailRows } from "./detail.js";

const archive = parseArchive(
	readFileSync(new URL("../testdata/results.json", import.meta.url), "utf8"),
);

describe("score classification", () => {
	it("styles 0.5 as partial and 0.04 as failed", () => {
		expect(classifyScore(0.5)).toBe("partial");
		expect(classifyScore(0.04)).toBe("failed");
	});

	it("boundary values", () => {
		expect(classifyScore(0.05)).toBe("partial");
		expect(classifyScore(0.949)).toBe("partial");
		expect(classifyScore(0.95)).toBe("passed");
		expect(classifyScore(0)).toBe("failed");
		expect(classifyScore(1)).toBe("passed");
	});

	it("skipped experiments get distinct not-eligible styling", () => {
		expect(
			classifyExperiment({
				test: "mnist",
				explainer: "tree_shap",
				status: "skipped_ineligible",
				time_s: 0,
				seed: 1,
			}),
		).toBe("not-eligible");
	});
});

describe("detail rows", () => {
	it("lists every experiment of the selected explainer", () => {
		const rows = detailRows(archive, "tree_shap");
		const own = archive.experiments.filter((e) => e.explainer === "tree_shap");
		expect(rows.length).toBe(own.length);
		const skipped = rows.filter((r) => r.klass === "not-eligible");
		expect(skipped.length).toBeGreaterThan(0); // mlp/scripted/corrupted tests
	});

	it("dual-output tests appear once per output", () => {
		const rows = detailRows(archive, "kernel_shap").filter(
			(r) => r.test === "cough_and_fever",
		);
		expect(rows.map((r) => r.output).sort()).toEqual(["attribution", "importance"]);
	});

	it("completed rows carry their archive score verbatim", () => {
		const rows = detailRows(archive, "kernel_shap");
		for (const row of rows) {
			if (row.status !== "completed") continue;
			const source = archive.experiments.find(
				(e) =>
					e.explainer === "kernel_shap" &&
					e.test === row.test &&
					(e.output ?? "importance") === row.output,
			);
			expect(row.score).toBe(source?.score);
		}
	});
});

describe("descriptor block", () => {
	it("lists capability fields verbatim from the archive", () => {
		const card = archive.scorecards.find((c) => c.explainer === "sage")!;
		const block = descriptorBlock(card);
		expect(block.supportedModels).toEqual(card.supported_models);
		expect(block.outputs).toEqual(card.outputs);
		expect(block.requiredInputs).toEqual(card.required_inputs);
		expect(block.portability).toBe(card.portability);
	});
});
