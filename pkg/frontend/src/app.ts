/** DOM wiring for the explorer: archive loading (same-directory fetch or
 * file picker), filter controls, the SVG scatter, and the detail pane.
 * All numbers shown come straight from the archive. */

import { formatPercent, formatSeconds, parseArchive } from "./archive.js";
import { descriptorBlock, detailRows } from "./detail.js";
import { buildScatter } from "./scatter.js";
import {
	decodeHash,
	encodeHash,
	filteredCards,
	initialState,
	withFilters,
	withSelection,
	type ExplorerState,
	type Filters,
} from "./state.js";
import { CATEGORIES } from "./types.js";

let state: ExplorerState | null = null;

const $ = (id: string) => document.getElementById(id) as HTMLElement;

function banner(message: string | null): void {
	const el = $("banner");
	el.textContent = message ?? "";
	el.style.display = message ? "block" : "none";
}

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
	return document.createElementNS("http://www.w3.org/2000/svg", tag);
}

function pushHistory(): void {
	if (!state) return;
	const hash = encodeHash(state);
	const target = hash ? `#${hash}` : location.pathname;
	if (`#${hash}` !== location.hash) history.pushState(null, "", target);
}

function applyHash(): void {
	if (!state) return;
	const { filters, selected } = decodeHash(location.hash);
	state = withSelection(withFilters(state, filters), selected);
	renderAll(false);
}

function setFilters(filters: Filters): void {
	if (!state) return;
	state = withFilters(state, filters);
	pushHistory();
	renderAll(false);
}

function select(explainer: string | null): void {
	if (!state) return;
	state = withSelection(state, explainer);
	pushHistory();
	renderAll(false);
}

function readFilterControls(): Filters {
	const kind = ($("kind-filter") as HTMLSelectElement).value as Filters["kind"];
	const output = ($("output-filter") as HTMLSelectElement).value as Filters["output"];
	const categoryMin: Filters["categoryMin"] = {};
	for (const category of CATEGORIES) {
		const input = document.getElementById(`min-${category}`) as HTMLInputElement | null;
		if (input && input.value !== "" && Number(input.value) > 0) {
			categoryMin[category] = Number(input.value);
		}
	}
	return { kind, output, categoryMin };
}

function writeFilterControls(): void {
	if (!state) return;
	($("kind-filter") as HTMLSelectElement).value = state.filters.kind;
	($("output-filter") as HTMLSelectElement).value = state.filters.output;
	for (const category of CATEGORIES) {
		const input = document.getElementById(`min-${category}`) as HTMLInputElement | null;
		if (input) {
			const v = state.filters.categoryMin[category];
			input.value = v === undefined ? "" : String(v);
		}
	}
}

function renderScatter(): void {
	if (!state) return;
	const cards = filteredCards(state);
	const layout = buildScatter(cards, state.archive.pareto);
	const svg = $("scatter") as unknown as SVGSVGElement;
	svg.setAttribute("viewBox", `0 0 ${layout.width} ${layout.height}`);
	svg.replaceChildren();

	for (const tick of layout.xTicks) {
		const line = svgEl("line");
		line.setAttribute("x1", String(tick.x));
		line.setAttribute("x2", String(tick.x));
		line.setAttribute("y1", String(layout.margin));
		line.setAttribute("y2", String(layout.height - layout.margin));
		line.setAttribute("class", "grid");
		svg.append(line);
		const label = svgEl("text");
		label.textContent = tick.label;
		label.setAttribute("x", String(tick.x));
		label.setAttribute("y", String(layout.height - layout.margin + 16));
		label.setAttribute("class", "tick");
		svg.append(label);
	}
	for (const tick of layout.yTicks) {
		const label = svgEl("text");
		label.textContent = tick.label;
		label.setAttribute("x", String(layout.margin - 10));
		label.setAttribute("y", String(tick.y + 4));
		label.setAttribute("class", "tick tick-y");
		svg.append(label);
	}
	const xAxis = svgEl("text");
	xAxis.textContent = "average time per test [s, log scale]";
	xAxis.setAttribute("x", String(layout.width / 2));
	xAxis.setAttribute("y", String(layout.height - 8));
	xAxis.setAttribute("class", "axis-label");
	svg.append(xAxis);
	const yAxis = svgEl("text");
	yAxis.textContent = "comprehensibility [%]";
	yAxis.setAttribute("x", "14");
	yAxis.setAttribute("y", String(layout.height / 2));
	yAxis.setAttribute("class", "axis-label");
	yAxis.setAttribute("transform", `rotate(-90 14 ${layout.height / 2})`);
	svg.append(yAxis);

	for (const dot of layout.dots) {
		const circle = svgEl("circle");
		circle.setAttribute("cx", String(dot.x));
		circle.setAttribute("cy", String(dot.y));
		circle.setAttribute("r", String(dot.radius));
		const classes = ["dot"];
		if (dot.pareto) classes.push("pareto");
		if (state.selected === dot.explainer) classes.push("selected");
		circle.setAttribute("class", classes.join(" "));
		circle.addEventListener("click", () => select(dot.explainer));
		const title = svgEl("title");
		title.textContent =
			`${dot.explainer}\n` +
			`time ${formatSeconds(dot.timeS)}s, comprehensibility ${formatPercent(dot.comprehensibility)}%\n` +
			`portability ${dot.portability}${dot.pareto ? ", Pareto front" : ""}`;
		circle.append(title);
		svg.append(circle);

		const label = svgEl("text");
		label.textContent = dot.explainer;
		label.setAttribute("x", String(dot.x + dot.radius + 4));
		label.setAttribute("y", String(dot.y + 4));
		label.setAttribute("class", "dot-label");
		svg.append(label);
	}
}

function renderTable(): void {
	if (!state) return;
	const cards = filteredCards(state);
	const body = $("cards-body");
	body.replaceChildren();
	for (const card of cards) {
		const tr = document.createElement("tr");
		if (state.selected === card.explainer) tr.classList.add("selected");
		const cells = [
			card.explainer,
			formatSeconds(card.avg_time_s),
			String(card.completed),
			...CATEGORIES.map((c) =>
				card.categories[c] === undefined ? "" : formatPercent(card.categories[c]),
			),
			formatPercent(card.comprehensibility),
			state.archive.pareto.includes(card.explainer) ? "yes" : "",
		];
		for (const text of cells) {
			const td = document.createElement("td");
			td.textContent = text;
			tr.append(td);
		}
		tr.addEventListener("click", () => select(card.explainer));
		body.append(tr);
	}
	$("filter-summary").textContent = `${cards.length} of ${state.archive.scorecards.length} explainers shown`;
}

function renderDetail(): void {
	if (!state) return;
	const pane = $("detail");
	if (!state.selected) {
		pane.style.display = "none";
		return;
	}
	pane.style.display = "block";
	const card = state.archive.scorecards.find((c) => c.explainer === state!.selected);
	if (!card) return;
	const block = descriptorBlock(card);
	$("detail-title").textContent = block.explainer;
	$("detail-descriptor").innerHTML = "";
	const dl = document.createElement("dl");
	const pairs: Array<[string, string]> = [
		["supported models", block.supportedModels.join(", ")],
		["outputs", block.outputs.join(", ")],
		["required inputs", block.requiredInputs.join(", ") || "(none)"],
		["perturbation-based", block.perturbationBased ? "yes" : "no"],
		["portability", String(block.portability)],
		["completed tests", String(block.completed)],
	];
	for (const [term, value] of pairs) {
		const dt = document.createElement("dt");
		dt.textContent = term;
		const dd = document.createElement("dd");
		dd.textContent = value;
		dl.append(dt, dd);
	}
	$("detail-descriptor").append(dl);

	const body = $("detail-body");
	body.replaceChildren();
	for (const row of detailRows(state.archive, state.selected)) {
		const tr = document.createElement("tr");
		tr.classList.add(row.klass);
		const score =
			row.score === null
				? row.status === "skipped_ineligible"
					? "not eligible"
					: "error"
				: row.score.toFixed(2);
		for (const text of [row.test, row.output, row.status, score, row.note]) {
			const td = document.createElement("td");
			td.textContent = text;
			tr.append(td);
		}
		body.append(tr);
	}
}

function renderAll(fromUserAction = true): void {
	if (!state) return;
	writeFilterControls();
	renderScatter();
	renderTable();
	renderDetail();
	$("meta").textContent =
		`seed ${state.archive.meta.master_seed} (${state.archive.meta.seed_policy}) - ` +
		`started ${state.archive.meta.started_at} - version ${state.archive.meta.version}`;
	if (fromUserAction) pushHistory();
}

function loadText(text: string): void {
	try {
		const archive = parseArchive(text);
		state = initialState(archive);
		banner(null);
		applyHash();
		renderAll(false);
	} catch (err) {
		banner((err as Error).message);
	}
}

async function boot(): Promise<void> {
	$("file-input").addEventListener("change", (event) => {
		const input = event.target as HTMLInputElement;
		const file = input.files?.[0];
		if (!file) return;
		file.text().then(loadText);
	});
	for (const id of ["kind-filter", "output-filter", ...CATEGORIES.map((c) => `min-${c}`)]) {
		document.getElementById(id)?.addEventListener("change", () => setFilters(readFilterControls()));
	}
	$("clear-selection").addEventListener("click", () => select(null));
	window.addEventListener("popstate", applyHash);

	try {
		const response = await fetch("./results.json");
		if (!response.ok) throw new Error(`fetch failed with ${response.status}`);
		loadText(await response.text());
	} catch {
		banner("No ./results.json next to the page - pick an archive file below.");
	}
}

boot();
