/** Shapes of the results archive produced by the benchmark CLI. */

export interface ArchiveMeta {
	master_seed: number;
	seed_policy: "entropy" | "fixed";
	started_at: string;
	version: string;
}

export type ExperimentStatus = "completed" | "skipped_ineligible" | "errored";

export interface Experiment {
	test: string;
	explainer: string;
	status: ExperimentStatus;
	time_s: number;
	seed: number;
	score?: number;
	output?: "importance" | "attribution";
	message?: string;
}

export interface Scorecard {
	explainer: string;
	categories: Record<string, number>;
	comprehensibility: number;
	avg_time_s: number;
	completed: number;
	portability: number;
	supported_models: string[];
	outputs: string[];
	required_inputs: string[];
	perturbation_based: boolean;
}

export interface Archive {
	meta: ArchiveMeta;
	experiments: Experiment[];
	scorecards: Scorecard[];
	pareto: string[];
}

export const CATEGORIES = [
	"fidelity",
	"fragility",
	"stability",
	"simplicity",
	"stress",
] as const;

export type Category = (typeof CATEGORIES)[number];

export const MODEL_KINDS = ["tree_ensemble", "mlp", "scripted", "corrupted"] as const;
