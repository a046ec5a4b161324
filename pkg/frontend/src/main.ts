/** Application shell: entity pickers, view tabs, and wiring between the
 * venn explorer, diagrams, pair browser, KPI matrix and ratio charts.
 * State round-trips through the URL hash. */

import { ApiClient } from "./api.js";
import type { DatasetInfo, ExperimentInfo, GoldInfo, VennRegion } from "./api.js";
import { renderEffortChart, renderMetricDiagram } from "./diagram.js";
import { renderDecisionMatrix, renderRatioBars } from "./kpi.js";
import { showExpressionPage } from "./pairs.js";
import type { PairBrowserState } from "./pairs.js";
import { decodeSession, pushSession } from "./state.js";
import type { ExplorerSession } from "./state.js";
import { renderVenn } from "./venn.js";

const VIEWS = ["venn", "diagram", "pairs", "kpi", "ratios"] as const;

function option(value: string, label: string): HTMLOptionElement {
  const node = document.createElement("option");
  node.value = value;
  node.textContent = label;
  return node;
}

export class ExplorerApp {
  session: ExplorerSession;
  private datasets: DatasetInfo[] = [];
  private golds: GoldInfo[] = [];
  private experiments: ExperimentInfo[] = [];

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
  ) {
    this.session = decodeSession(window.location.hash);
  }

  private el<T extends HTMLElement>(selector: string): T {
    const node = this.root.querySelector<T>(selector);
    if (!node) throw new Error(`missing element ${selector}`);
    return node;
  }

  async start(): Promise<void> {
    this.root.innerHTML = `
      <header>
        <h1>matcheval explorer</h1>
        <nav id="tabs"></nav>
      </header>
      <section id="pickers">
        <label>dataset <select id="pick-dataset"></select></label>
        <label>gold standard <select id="pick-gold"></select></label>
        <label>experiments <select id="pick-experiments" multiple size="4"></select></label>
      </section>
      <main id="view"></main>
      <section id="drilldown">
        <table id="pair-table"></table>
        <div id="pair-pager"></div>
        <div id="explain"></div>
      </section>
    `;
    const tabs = this.el<HTMLElement>("#tabs");
    for (const view of VIEWS) {
      const button = document.createElement("button");
      button.textContent = view;
      button.dataset.view = view;
      button.addEventListener("click", () => {
        this.session.view = view;
        this.sync();
        void this.renderView();
      });
      tabs.appendChild(button);
    }

    [this.datasets, this.golds, this.experiments] = await Promise.all([
      this.api.listDatasets(),
      this.api.listGoldStandards(),
      this.api.listExperiments(),
    ]);
    this.fillPickers();
    await this.renderView();
  }

  private fillPickers(): void {
    const datasetPick = this.el<HTMLSelectElement>("#pick-dataset");
    datasetPick.replaceChildren(
      ...this.datasets.map((d) => option(d.id, `${d.name} (${d.recordCount})`)));
    if (!this.session.datasetId && this.datasets.length) {
      this.session.datasetId = this.datasets[0].id;
    }
    if (this.session.datasetId) datasetPick.value = this.session.datasetId;
    datasetPick.addEventListener("change", () => {
      this.session.datasetId = datasetPick.value;
      this.session.goldId = undefined;
      this.session.experimentIds = [];
      this.fillPickers();
      this.sync();
      void this.renderView();
    });

    const relevantGolds = this.golds.filter(
      (g) => g.datasetId === this.session.datasetId);
    const goldPick = this.el<HTMLSelectElement>("#pick-gold");
    goldPick.replaceChildren(
      ...relevantGolds.map((g) => option(g.id, g.name || g.id)));
    if (!this.session.goldId && relevantGolds.length) {
      this.session.goldId = relevantGolds[0].id;
    }
    if (this.session.goldId) goldPick.value = this.session.goldId;
    goldPick.addEventListener("change", () => {
      this.session.goldId = goldPick.value;
      this.sync();
      void this.renderView();
    });

    const relevantExperiments = this.experiments.filter(
      (e) => e.datasetId === this.session.datasetId);
    const experimentPick = this.el<HTMLSelectElement>("#pick-experiments");
    experimentPick.replaceChildren(
      ...relevantExperiments.map((e) => option(e.id, e.name)));
    if (this.session.experimentIds.length === 0) {
      this.session.experimentIds = relevantExperiments.slice(0, 2).map((e) => e.id);
    }
    for (const node of experimentPick.options) {
      node.selected = this.session.experimentIds.includes(node.value);
    }
    experimentPick.addEventListener("change", () => {
      this.session.experimentIds = [...experimentPick.selectedOptions].map(
        (o) => o.value);
      this.sync();
      void this.renderView();
    });
  }

  private sync(): void {
    pushSession(this.session);
  }

  private attributeNames(): string[] {
    return this.datasets.find((d) => d.id === this.session.datasetId)
      ?.attributeNames ?? [];
  }

  async renderView(): Promise<void> {
    const view = this.el<HTMLElement>("#view");
    try {
      if (this.session.view === "venn") await this.renderVennView(view);
      else if (this.session.view === "diagram") await this.renderDiagramView(view);
      else if (this.session.view === "pairs") await this.renderPairsView();
      else if (this.session.view === "kpi") await this.renderKpiView(view);
      else await this.renderRatioView(view);
    } catch (error) {
      const message = document.createElement("p");
      message.classList.add("error");
      message.textContent = error instanceof Error ? error.message : String(error);
      view.replaceChildren(message);
    }
  }

  /** Region click: run the region's set expression and open the browser. */
  async onRegionSelect(region: VennRegion): Promise<void> {
    this.session.expression = region.expression;
    this.session.view = "pairs";
    this.sync();
    await this.renderPairsView();
  }

  private vennSources(): string[] {
    const sources = this.session.experimentIds.map((id) => `experiment:${id}`);
    if (this.session.goldId) sources.push(`gold:${this.session.goldId}`);
    return sources.slice(0, 4);
  }

  private async renderVennView(view: HTMLElement): Promise<void> {
    if (!this.session.datasetId) return;
    const sources = this.vennSources();
    if (sources.length < 2) {
      view.textContent = "select at least two sources (experiments / gold)";
      return;
    }
    const response = await this.api.venn(this.session.datasetId, sources);
    renderVenn(view, response, (region) => void this.onRegionSelect(region));
  }

  private async renderDiagramView(view: HTMLElement): Promise<void> {
    const experimentId = this.session.experimentIds[0];
    if (!experimentId || !this.session.goldId) {
      view.textContent = "select an experiment and a gold standard";
      return;
    }
    const config = this.session.diagram;
    const diagram = await this.api.diagram(
      experimentId, this.session.goldId, config.x, config.y, config.s);
    const handle = renderMetricDiagram(view, diagram, (_point, index) => {
      this.session.diagram.selectedIndex = index;
      this.sync();
    });
    handle.selectPoint(config.selectedIndex);
    if (this.session.goldId) {
      const effortTarget = document.createElement("div");
      view.appendChild(effortTarget);
      try {
        const series = await this.api.effortDiagram(this.session.goldId, "f1", true);
        renderEffortChart(effortTarget, series);
      } catch {
        // experiments without effort KPIs: chart silently unavailable
      }
    }
  }

  private async renderPairsView(): Promise<void> {
    if (!this.session.datasetId) return;
    if (!this.session.expression) {
      this.session.expression = {
        include: this.vennSources().slice(0, 1),
        exclude: [],
        pairMode: "closure",
      };
    }
    const state: PairBrowserState = {
      datasetId: this.session.datasetId,
      attributeNames: this.attributeNames(),
      expression: this.session.expression,
      page: 1,
      pageSize: 50,
      sortDescending: true,
      experimentId: this.session.experimentIds[0],
      goldId: this.session.goldId,
    };
    await showExpressionPage(
      this.api, state,
      this.el<HTMLTableElement>("#pair-table"),
      this.el<HTMLElement>("#pair-pager"),
      this.el<HTMLElement>("#explain"));
  }

  private async renderKpiView(view: HTMLElement): Promise<void> {
    const matrix = await this.api.decisionMatrix(this.session.goldId);
    renderDecisionMatrix(view, matrix.rows, ["precision", "recall", "f1"]);
  }

  private async renderRatioView(view: HTMLElement): Promise<void> {
    const experimentId = this.session.experimentIds[0];
    if (!experimentId || !this.session.goldId) {
      view.textContent = "select an experiment and a gold standard";
      return;
    }
    const [nulls, equals] = await Promise.all([
      this.api.nullRatio(experimentId, this.session.goldId),
      this.api.equalRatio(experimentId, this.session.goldId),
    ]);
    const left = document.createElement("div");
    const right = document.createElement("div");
    renderRatioBars(left, "null ratio per attribute", nulls);
    renderRatioBars(right, "equal ratio per attribute", equals);
    view.replaceChildren(left, right);
  }
}

export function bootstrap(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  const app = new ExplorerApp(new ApiClient(""), root);
  void app.start();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  bootstrap();
}
