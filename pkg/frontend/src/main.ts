// Single-page review controller. All data flows through the HTTP API client;
// the session id lives in the URL hash so a reload restores the same state
// from the service's replayed session.

import {
  ApiClient,
  type AggFn,
  type DecisionEntry,
  type ProjectDocument,
  type SessionView,
} from "./api.js";
import {
  allowedDecisions,
  applyDecision,
  formatScore,
  headerLabel,
  mergePairs,
  toRows,
  validateDecision,
  validateNewPair,
  type MatchRow,
} from "./model.js";
import { computeBars } from "./chart.js";

const AGG_FNS: AggFn[] = ["sum", "avg", "count", "min", "max"];
const CHART_WIDTH = 640;
const CHART_HEIGHT = 280;
const LABEL_SPACE = 70;

// ─── Types ──────────────────────────────────────────────────────────────────

export interface AppOptions {
  client: ApiClient;
  window?: Pick<Window, "location">;
}

export interface AppHandle {
  ready: Promise<void>;
  root: HTMLElement;
  refresh(): Promise<void>;
  assignAxis(axis: "x" | "y", position: number): Promise<void>;
}

interface AppState {
  view: SessionView | null;
  source: ProjectDocument | null;
  target: ProjectDocument | null;
  merged: ProjectDocument | null;
  xAxis: number | null;
  yAxis: number | null;
  fn: AggFn;
}

// ─── App ────────────────────────────────────────────────────────────────────

export function initApp(root: HTMLElement, options: AppOptions): AppHandle {
  const client = options.client;
  const win = options.window ?? window;
  const doc = root.ownerDocument;

  const state: AppState = {
    view: null,
    source: null,
    target: null,
    merged: null,
    xAxis: null,
    yAxis: null,
    fn: "sum",
  };

  root.innerHTML = `
    <div class="banner hidden" data-role="error"></div>
    <section data-role="setup">
      <label>Source <select data-role="source-select"></select></label>
      <label>Target <select data-role="target-select"></select></label>
      <button data-role="start">Match</button>
    </section>
    <section data-role="review" class="hidden">
      <h2>Suggested matches</h2>
      <table class="suggestions">
        <thead></thead>
        <tbody></tbody>
      </table>
      <div class="add-pair">
        <label>Add pair <select data-role="add-source"></select></label>
        <select data-role="add-target"></select>
        <button data-role="add-pair">Add</button>
      </div>
      <button data-role="merge">Merge accepted columns</button>
    </section>
    <section data-role="chart" class="hidden">
      <h2>Summarize the merged table</h2>
      <div class="chips" data-role="chips"></div>
      <div class="axes">
        <div class="dropzone" data-role="x-drop" data-axis="x">x axis: drop a column</div>
        <div class="dropzone" data-role="y-drop" data-axis="y">y axis: drop a column</div>
        <select data-role="fn"></select>
      </div>
      <div class="banner hidden" data-role="chart-error"></div>
      <svg data-role="chart-svg" width="${CHART_WIDTH}" height="${CHART_HEIGHT + LABEL_SPACE}"></svg>
    </section>
  `;

  const el = <T extends Element>(role: string): T => {
    const found = root.querySelector(`[data-role="${role}"]`);
    if (!found) throw new Error(`missing element ${role}`);
    return found as T;
  };

  const errorBanner = el<HTMLElement>("error");
  const chartError = el<HTMLElement>("chart-error");

  function showError(message: string): void {
    errorBanner.textContent = message;
    errorBanner.classList.remove("hidden");
  }

  function clearError(): void {
    errorBanner.textContent = "";
    errorBanner.classList.add("hidden");
  }

  function messageOf(err: unknown): string {
    return err instanceof Error ? err.message : String(err);
  }

  // ── session bootstrap ──

  function sessionFromHash(): string | null {
    const match = /#session=([0-9a-f]+)/.exec(win.location.hash);
    return match ? (match[1] ?? null) : null;
  }

  async function loadProjectList(): Promise<void> {
    const listing = await client.listProjects();
    for (const role of ["source-select", "target-select"]) {
      const select = el<HTMLSelectElement>(role);
      select.innerHTML = "";
      for (const project of listing.projects) {
        const option = doc.createElement("option");
        option.value = project.project;
        option.textContent = `${project.name} (${project.rows} rows)`;
        select.appendChild(option);
      }
    }
  }

  async function loadSession(id: string): Promise<void> {
    state.view = await client.getSession(id);
    [state.source, state.target] = await Promise.all([
      client.getProject(state.view.source),
      client.getProject(state.view.target),
    ]);
    if (state.view.merged_project) {
      state.merged = await client.getProject(state.view.merged_project);
    } else {
      state.merged = null;
    }
    renderReview();
    renderChartPanel();
  }

  async function startSession(): Promise<void> {
    const source = el<HTMLSelectElement>("source-select").value;
    const target = el<HTMLSelectElement>("target-select").value;
    const view = await client.createSession(source, target);
    win.location.hash = `#session=${view.session}`;
    await loadSession(view.session);
  }

  // ── review table ──

  function postDecision(entry: DecisionEntry): Promise<void> {
    const view = state.view;
    if (!view || !state.target) return Promise.resolve();
    const problem = validateDecision(view, entry, state.target.headers.length);
    if (problem) {
      showError(problem);
      return Promise.resolve();
    }
    // optimistic render, rolled back if the service refuses
    const previous = view;
    state.view = applyDecision(view, entry);
    renderReview();
    return client
      .postDecision(view.session, entry)
      .then((updated) => {
        state.view = updated;
        clearError();
      })
      .catch((err) => {
        state.view = previous;
        showError(messageOf(err));
      })
      .then(renderReview);
  }

  function decisionControls(row: MatchRow): HTMLElement {
    const cell = doc.createElement("td");
    const allowed = allowedDecisions(row.status);
    for (const decision of allowed) {
      if (decision === "edit") continue;
      const button = doc.createElement("button");
      button.textContent = decision;
      button.dataset["decision"] = decision;
      button.addEventListener("click", () => {
        void postDecision({ pair: [row.source, row.target], decision });
      });
      cell.appendChild(button);
    }
    if (allowed.includes("edit") && state.target) {
      const select = doc.createElement("select");
      select.dataset["decision"] = "edit";
      const placeholder = doc.createElement("option");
      placeholder.value = "";
      placeholder.textContent = "edit target...";
      select.appendChild(placeholder);
      state.target.headers.forEach((_, position) => {
        if (position === row.target) return;
        const option = doc.createElement("option");
        option.value = String(position);
        option.textContent = headerLabel(state.target!, position);
        select.appendChild(option);
      });
      select.addEventListener("change", () => {
        if (select.value === "") return;
        void postDecision({
          pair: [row.source, row.target],
          decision: "edit",
          target: Number(select.value),
        });
      });
      cell.appendChild(select);
    }
    return cell;
  }

  function renderReview(): void {
    const view = state.view;
    if (!view || !state.source || !state.target) return;
    el<HTMLElement>("setup").classList.add("hidden");
    const section = el<HTMLElement>("review");
    section.classList.remove("hidden");

    const thead = section.querySelector("thead")!;
    thead.innerHTML = "";
    const headRow = doc.createElement("tr");
    const columns = [
      "Source",
      "Target",
      ...view.config.matchers,
      "Combined",
      "Decision",
    ];
    for (const column of columns) {
      const th = doc.createElement("th");
      th.textContent = column;
      headRow.appendChild(th);
    }
    thead.appendChild(headRow);

    const tbody = section.querySelector("tbody")!;
    tbody.innerHTML = "";
    for (const row of toRows(view, state.source, state.target)) {
      const tr = doc.createElement("tr");
      tr.dataset["source"] = String(row.source);
      tr.dataset["target"] = String(row.target);
      tr.dataset["status"] = row.status;
      tr.className = row.status;

      const sourceCell = doc.createElement("td");
      sourceCell.textContent = row.sourceHeader;
      tr.appendChild(sourceCell);

      const targetCell = doc.createElement("td");
      targetCell.textContent =
        row.editedTarget !== undefined
          ? `${row.targetHeader} -> ${headerLabel(state.target, row.editedTarget)}`
          : row.targetHeader;
      tr.appendChild(targetCell);

      for (const matcher of view.config.matchers) {
        const td = doc.createElement("td");
        td.textContent = formatScore(row.scores ? row.scores[matcher] : null);
        tr.appendChild(td);
      }

      const combined = doc.createElement("td");
      combined.textContent = row.combined === null ? "added" : row.combined.toFixed(4);
      tr.appendChild(combined);

      tr.appendChild(decisionControls(row));
      tbody.appendChild(tr);
    }

    renderAddPair();
    el<HTMLButtonElement>("merge").disabled = mergePairs(view).length === 0;
  }

  function renderAddPair(): void {
    if (!state.source || !state.target) return;
    const fill = (role: string, project: ProjectDocument) => {
      const select = el<HTMLSelectElement>(role);
      const kept = select.value;
      select.innerHTML = "";
      project.headers.forEach((_, position) => {
        const option = doc.createElement("option");
        option.value = String(position);
        option.textContent = headerLabel(project, position);
        select.appendChild(option);
      });
      if (kept) select.value = kept;
    };
    fill("add-source", state.source);
    fill("add-target", state.target);
  }

  async function addPair(): Promise<void> {
    const view = state.view;
    if (!view || !state.source || !state.target) return;
    const source = Number(el<HTMLSelectElement>("add-source").value);
    const target = Number(el<HTMLSelectElement>("add-target").value);
    const problem = validateNewPair(
      view,
      source,
      target,
      state.source.headers.length,
      state.target.headers.length,
    );
    if (problem) {
      showError(problem);
      return;
    }
    try {
      state.view = await client.postDecision(view.session, {
        pair: [source, target],
        decision: "accept",
      });
      clearError();
    } catch (err) {
      showError(messageOf(err));
    }
    renderReview();
  }

  async function mergeAccepted(): Promise<void> {
    const view = state.view;
    if (!view) return;
    try {
      const result = await client.merge(view.session);
      state.view = await client.getSession(view.session);
      state.merged = await client.getProject(result.project);
      clearError();
    } catch (err) {
      showError(messageOf(err));
      return;
    }
    renderReview();
    renderChartPanel();
  }

  // ── chart panel ──

  function renderChartPanel(): void {
    const section = el<HTMLElement>("chart");
    if (!state.merged) {
      section.classList.add("hidden");
      return;
    }
    section.classList.remove("hidden");

    const fnSelect = el<HTMLSelectElement>("fn");
    if (fnSelect.options.length === 0) {
      for (const fn of AGG_FNS) {
        const option = doc.createElement("option");
        option.value = fn;
        option.textContent = fn;
        fnSelect.appendChild(option);
      }
    }
    fnSelect.value = state.fn;

    const chips = el<HTMLElement>("chips");
    chips.innerHTML = "";
    state.merged.headers.forEach((_, position) => {
      const chip = doc.createElement("span");
      chip.className = "chip";
      chip.draggable = true;
      chip.dataset["position"] = String(position);
      chip.textContent = `${headerLabel(state.merged!, position)} [${state.merged!.kinds[position]}]`;
      chip.addEventListener("dragstart", (event: DragEvent) => {
        event.dataTransfer?.setData("text/plain", String(position));
      });
      // click fallback: fill x first, then y
      chip.addEventListener("click", () => {
        void assignAxis(state.xAxis === null ? "x" : "y", position);
      });
      chips.appendChild(chip);
    });

    for (const axis of ["x", "y"] as const) {
      const zone = el<HTMLElement>(`${axis}-drop`);
      const position = axis === "x" ? state.xAxis : state.yAxis;
      zone.textContent =
        position === null
          ? `${axis} axis: drop a column`
          : `${axis}: ${headerLabel(state.merged, position)}`;
    }
  }

  async function renderChart(): Promise<void> {
    const view = state.view;
    const merged = state.merged;
    const svg = el<SVGSVGElement>("chart-svg");
    svg.innerHTML = "";
    chartError.classList.add("hidden");
    chartError.textContent = "";
    if (!view?.merged_project || !merged) return;
    if (state.xAxis === null || state.yAxis === null) return;

    if (state.fn !== "count" && merged.kinds[state.yAxis] !== "numeric") {
      chartError.textContent = `${state.fn} needs a numeric y column`;
      chartError.classList.remove("hidden");
      return;
    }

    let series;
    try {
      series = await client.aggregate(
        view.merged_project,
        state.xAxis,
        state.yAxis,
        state.fn,
      );
      clearError();
    } catch (err) {
      chartError.textContent = messageOf(err);
      chartError.classList.remove("hidden");
      return;
    }

    const layout = computeBars(series.series, CHART_WIDTH, CHART_HEIGHT);
    const ns = "http://www.w3.org/2000/svg";
    for (const bar of layout.bars) {
      const rect = doc.createElementNS(ns, "rect");
      rect.setAttribute("x", bar.x.toFixed(2));
      rect.setAttribute("y", bar.y.toFixed(2));
      rect.setAttribute("width", bar.width.toFixed(2));
      rect.setAttribute("height", bar.height.toFixed(2));
      rect.setAttribute("class", "bar");
      rect.setAttribute("data-key", bar.key);
      rect.setAttribute("data-value", String(bar.value));
      svg.appendChild(rect);

      const label = doc.createElementNS(ns, "text");
      label.setAttribute("x", (bar.x + bar.width / 2).toFixed(2));
      label.setAttribute("y", String(CHART_HEIGHT + 14));
      label.setAttribute(
        "transform",
        `rotate(40 ${(bar.x + bar.width / 2).toFixed(2)} ${CHART_HEIGHT + 14})`,
      );
      label.textContent = bar.key === "" ? "(empty)" : bar.key;
      svg.appendChild(label);
    }
  }

  async function assignAxis(axis: "x" | "y", position: number): Promise<void> {
    if (!state.merged) return;
    if (position < 0 || position >= state.merged.headers.length) {
      showError("column out of range");
      return;
    }
    if (axis === "x") state.xAxis = position;
    else state.yAxis = position;
    renderChartPanel();
    await renderChart();
  }

  // ── wiring ──

  el<HTMLButtonElement>("start").addEventListener("click", () => {
    void startSession().catch((err) => showError(messageOf(err)));
  });
  el<HTMLButtonElement>("add-pair").addEventListener("click", () => {
    void addPair();
  });
  el<HTMLButtonElement>("merge").addEventListener("click", () => {
    void mergeAccepted();
  });
  el<HTMLSelectElement>("fn").addEventListener("change", () => {
    state.fn = el<HTMLSelectElement>("fn").value as AggFn;
    void renderChart();
  });
  for (const axis of ["x", "y"] as const) {
    const zone = el<HTMLElement>(`${axis}-drop`);
    zone.addEventListener("dragover", (event) => event.preventDefault());
    zone.addEventListener("drop", (event: DragEvent) => {
      event.preventDefault();
      const raw = event.dataTransfer?.getData("text/plain");
      if (raw !== undefined && raw !== "") {
        void assignAxis(axis, Number(raw));
      }
    });
  }

  async function boot(): Promise<void> {
    try {
      const existing = sessionFromHash();
      if (existing) {
        await loadSession(existing);
      } else {
        await loadProjectList();
      }
    } catch (err) {
      showError(messageOf(err));
    }
  }

  const handle: AppHandle = {
    ready: boot(),
    root,
    refresh: async () => {
      const id = state.view?.session ?? sessionFromHash();
      if (id) await loadSession(id);
    },
    assignAxis,
  };
  return handle;
}
