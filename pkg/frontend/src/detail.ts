/** Per-explainer drill-down: test rows with pass/partial/fail styling and
 * the capability descriptor verbatim from the archive. */

import type { Archive, Experiment, Scorecard } from "./types.js";

export type ResultClass = "passed" | "partial" | "failed" | "not-eligible" | "errored";

export const FAILED_BELOW = 0.05;
export const PASSED_FROM = 0.95;

/** Presentation classification mirroring the benchmark's thresholds. */
export function classifyScore(score: number): "passed" | "partial" | "failed" {
	if (score < FAILED_BELOW) return "failed";
	if (score < PASSED_FROM) return "partial";
	return "passed";
}

export interface DetailRow {
	test: string;
	output: string;
	status: Experiment["status"];
	score: number | null;
	klass: ResultClass;
	note: string;
}

export function classifyExperiment(e: Experiment): ResultClass {
	if (e.status === "skipped_ineligible") return "not-eligible";
	if (e.status === "errored") return "errored";
	return classifyScore(e.score ?? 0);
}

export function detailRows(archive: Archive, explainer: string): DetailRow[] {
	return archive.experiments
		.filter((e) => e.explainer === explainer)
		.map((e) => ({
			test: e.test,
			output: e.output ?? "importance",
			status: e.status,
			score: e.status === "completed" ? (e.score as number) : null,
			klass: classifyExperiment(e),
			note: e.message ?? "",
		}));
}

export interface DescriptorBlock {
	explainer: string;
	supportedModels: string[];
	outputs: string[];
	requiredInputs: string[];
	perturbationBased: boolean;
	portability: number;
	completed: number;
}

export function descriptorBlock(card: Scorecard): DescriptorBlock {
	return {
		explainer: card.explainer,
		supportedModels: card.supported_models,
		outputs: card.outputs,
		requiredInputs: card.required_inputs,
		perturbationBased: card.perturbation_based,
		portability: card.portability,
		completed: card.completed,
	};
}
