/** Archive loading and validation.
 *
 * Validation walks the document and reports the first failing path as text,
 * so the UI can show a descriptive banner instead of a blank screen. The
 * explorer never recomputes scores: everything rendered exists verbatim in
 * the archive.
 */

import type { Archive } from "./types.js";

function fail(path: string, problem: string): string {
	return `${path}: ${problem}`;
}

function isRecord(value: unknown): value is Record<string, unknown> {
	return typeof value === "object" && value !== null && !Array.isArray(value);
}

function checkNumber(value: unknown, path: string): string | null {
	return typeof value === "number" && Number.isFinite(value)
		? null
		: fail(path, "expected a finite number");
}

function checkString(value: unknown, path: string): string | null {
	return typeof value === "string" ? null : fail(path, "expected a string");
}

function checkStringArray(value: unknown, path: string): string | null {
	if (!Array.isArray(value)) return fail(path, "expected an array");
	for (let i = 0; i < value.length; i++) {
		if (typeof value[i] !== "string") return fail(`${path}/${i}`, "expected a string");
	}
	return null;
}

const STATUSES = new Set(["completed", "skipped_ineligible", "errored"]);

/** Returns the first schema violation as "path: problem", or null if valid. */
export function validateArchive(doc: unknown): string | null {
	if (!isRecord(doc)) return fail("<root>", "expected an object");
	for (const key of ["meta", "experiments", "scorecards", "pareto"]) {
		if (!(key in doc)) return fail("<root>", `missing required key "${key}"`);
	}

	const meta = doc.meta;
	if (!isRecord(meta)) return fail("meta", "expected an object");
	const metaChecks: Array<string | null> = [
		checkNumber(meta.master_seed, "meta/master_seed"),
		checkString(meta.seed_policy, "meta/seed_policy"),
		checkString(meta.started_at, "meta/started_at"),
		checkString(meta.version, "meta/version"),
	];
	for (const err of metaChecks) if (err) return err;

	if (!Array.isArray(doc.experiments)) return fail("experiments", "expected an array");
	for (let i = 0; i < doc.experiments.length; i++) {
		const e = doc.experiments[i];
		const path = `experiments/${i}`;
		if (!isRecord(e)) return fail(path, "expected an object");
		const errs = [
			checkString(e.test, `${path}/test`),
			checkString(e.explainer, `${path}/explainer`),
			checkString(e.status, `${path}/status`),
			checkNumber(e.time_s, `${path}/time_s`),
			checkNumber(e.seed, `${path}/seed`),
		];
		for (const err of errs) if (err) return err;
		if (!STATUSES.has(e.status as string)) {
			return fail(`${path}/status`, `unknown status "${String(e.status)}"`);
		}
		if (e.status === "completed") {
			const err = checkNumber(e.score, `${path}/score`);
			if (err) return err;
			const score = e.score as number;
			if (score < 0 || score > 1) return fail(`${path}/score`, "score outside [0, 1]");
		}
	}

	if (!Array.isArray(doc.scorecards)) return fail("scorecards", "expected an array");
	for (let i = 0; i < doc.scorecards.length; i++) {
		const c = doc.scorecards[i];
		const path = `scorecards/${i}`;
		if (!isRecord(c)) return fail(path, "expected an object");
		const errs = [
			checkString(c.explainer, `${path}/explainer`),
			checkNumber(c.comprehensibility, `${path}/comprehensibility`),
			checkNumber(c.avg_time_s, `${path}/avg_time_s`),
			checkNumber(c.completed, `${path}/completed`),
			checkNumber(c.portability, `${path}/portability`),
			checkStringArray(c.supported_models, `${path}/supported_models`),
			checkStringArray(c.outputs, `${path}/outputs`),
			checkStringArray(c.required_inputs, `${path}/required_inputs`),
		];
		for (const err of errs) if (err) return err;
		if (!isRecord(c.categories)) return fail(`${path}/categories`, "expected an object");
		for (const [cat, v] of Object.entries(c.categories)) {
			const err = checkNumber(v, `${path}/categories/${cat}`);
			if (err) return err;
		}
	}

	const paretoErr = checkStringArray(doc.pareto, "pareto");
	if (paretoErr) return paretoErr;
	const ids = new Set((doc.scorecards as Array<{ explainer: string }>).map((c) => c.explainer));
	for (const id of doc.pareto as string[]) {
		if (!ids.has(id)) return fail("pareto", `unknown explainer "${id}"`);
	}
	return null;
}

/** Parse JSON text into a validated archive; throws with the failing path. */
export function parseArchive(text: string): Archive {
	let doc: unknown;
	try {
		doc = JSON.parse(text);
	} catch (err) {
		throw new Error(`not valid JSON: ${(err as Error).message}`);
	}
	const problem = validateArchive(doc);
	if (problem !== null) {
		throw new Error(`archive schema violation at ${problem}`);
	}
	return doc as Archive;
}

/** Presentation rounding only: one decimal, as the tables print it. */
export function formatPercent(value: number): string {
	return value.toFixed(1);
}

export function formatSeconds(value: number): string {
	return value < 0.0005 ? "<0.001" : value.toFixed(3);
}
