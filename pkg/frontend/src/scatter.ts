/** Scatter layout: pure geometry from scorecards to plotted dots.
 *
 * x is average time on a log scale, y is comprehensibility, radius grows
 * with portability, and Pareto-front members (read from the archive, never
 * recomputed) are marked.
 */

import type { Scorecard } from "./types.js";

export interface ScatterDot {
	explainer: string;
	x: number; // pixel position
	y: number;
	radius: number;
	pareto: boolean;
	timeS: number;
	comprehensibility: number;
	portability: number;
}

export interface ScatterLayout {
	width: number;
	height: number;
	margin: number;
	dots: ScatterDot[];
	xTicks: Array<{ x: number; label: string }>;
	yTicks: Array<{ y: number; label: string }>;
}

const MIN_TIME = 1e-3; // floor so log scaling tolerates sub-millisecond rows

export function radiusFor(portability: number): number {
	return 4 + 2.5 * portability;
}

export function buildScatter(
	cards: Scorecard[],
	pareto: string[],
	width = 720,
	height = 440,
	margin = 48,
): ScatterLayout {
	const paretoSet = new Set(pareto);
	const times = cards.map((c) => Math.max(c.avg_time_s, MIN_TIME));
	const logs = times.map(Math.log10);
	const lo = Math.floor(Math.min(0, ...logs));
	const hi = Math.ceil(Math.max(1, ...logs));

	const xOf = (t: number) =>
		margin + ((Math.log10(Math.max(t, MIN_TIME)) - lo) / (hi - lo)) * (width - 2 * margin);
	const yOf = (c: number) => height - margin - (c / 100) * (height - 2 * margin);

	const dots = cards.map((card) => ({
		explainer: card.explainer,
		x: xOf(card.avg_time_s),
		y: yOf(card.comprehensibility),
		radius: radiusFor(card.portability),
		pareto: paretoSet.has(card.explainer),
		timeS: card.avg_time_s,
		comprehensibility: card.comprehensibility,
		portability: card.portability,
	}));

	const xTicks = [];
	for (let p = lo; p <= hi; p++) {
		xTicks.push({ x: xOf(10 ** p), label: `1e${p}` });
	}
	const yTicks = [];
	for (let v = 0; v <= 100; v += 20) {
		yTicks.push({ y: yOf(v), label: String(v) });
	}
	return { width, height, margin, dots, xTicks, yTicks };
}

/** Ids marked as Pareto-front members in the plotted view. */
export function paretoMarked(layout: ScatterLayout): string[] {
	return layout.dots.filter((d) => d.pareto).map((d) => d.explainer).sort();
}
