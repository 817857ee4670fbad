import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { formatPercent, parseArchive, validateArchive } from "./archive.js";

const fixtureText = readFileSync(new URL("../testdata/results.json", import.meta.url), "utf8");

describe("archive validation", () => {
	it("accepts a harness-produced archive", () => {
		const archive = parseArchive(fixtureText);
		expect(archive.scorecards.length).toBe(11);
		expect(archive.experiments.length).toBeGreaterThan(80);
		expect(validateArchive(JSON.parse(fixtureText))).toBeNull();
	});

	it("rejects invalid JSON with a readable message", () => {
		expect(() => parseArchive("{ not json")).toThrow(/not valid JSON/);
	});

	it("names the first failing path for a missing key", () => {
		const doc = JSON.parse(fixtureText);
		delete doc.pareto;
		expect(validateArchive(doc)).toMatch(/missing required key "pareto"/);
	});

	it("names the failing experiment entry", () => {
		const doc = JSON.parse(fixtureText);
		doc.experiments[3].status = "exploded";
		expect(validateArchive(doc)).toContain("experiments/3/status");
	});

	it("rejects scores outside the unit interval", () => {
		const doc = JSON.parse(fixtureText);
		const completed = doc.experiments.findIndex(
			(e: { status: string }) => e.status === "completed",
		);
		doc.experiments[completed].score = 1.5;
		expect(validateArchive(doc)).toContain("score outside [0, 1]");
	});

	it("rejects pareto ids that have no scorecard", () => {
		const doc = JSON.parse(fixtureText);
		doc.pareto.push("ghost");
		expect(validateArchive(doc)).toMatch(/pareto.*ghost/);
	});

	it("rounds percentages to one decimal for presentation only", () => {
		expect(formatPercent(79.3333)).toBe("79.3");
		expect(formatPercent(100)).toBe("100.0");
	});
});
