import { ApiClient, ApiError } from "./api.js";
import { renderProjection } from "./projectionView.js";
import {
  dragToSubsets,
  heatmapLayout,
  metaPanelItems,
  renderHeatmap,
  testPanelItems,
} from "./panels.js";
import { EndpointPicker, renderScatter } from "./scatter.js";
import { DEFAULT_STATE, ViewState, debounce, decodeState, encodeState } from "./state.js";
import type {
  HeatmapPayload,
  Point,
  ProjectionPayload,
  SelectionPayload,
  SessionPayload,
} from "./types.js";

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function canvasContext(id: string): { canvas: HTMLCanvasElement; ctx: CanvasRenderingContext2D } {
  const canvas = el<HTMLCanvasElement>(id);
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("2d canvas not available");
  return { canvas, ctx };
}

class App {
  state: ViewState;
  session: SessionPayload | null = null;
  selection: SelectionPayload | null = null;
  projection: ProjectionPayload | null = null;
  heatmap: HeatmapPayload | null = null;
  picker = new EndpointPicker();
  lassoDraft: Point[][] = [];
  lassoActive: Point[] | null = null;

  private readonly scatter = canvasContext("scatter");
  private readonly projectionCanvas = canvasContext("projection");
  private readonly heatmapCanvas = canvasContext("heatmap");
  private readonly requestProjection = debounce(() => void this.project(), 250);

  constructor(state: ViewState) {
    this.state = state;
  }

  notice(text: string): void {
    el("notice").textContent = text;
  }

  syncFragment(): void {
    window.location.hash = encodeState(this.state);
  }

  async start(): Promise<void> {
    this.session = await api.sessionInfo(this.state.sessionId);
    this.bindControls();
    if (this.state.endpoints) {
      await this.selectPath(this.state.endpoints[0], this.state.endpoints[1]);
    }
    this.redrawScatter();
  }

  bindControls(): void {
    const medoid = el<HTMLInputElement>("toggle-medoid");
    medoid.checked = this.state.showMedoidTree;
    medoid.onchange = () => {
      this.state.showMedoidTree = medoid.checked;
      this.syncFragment();
      this.redrawScatter();
    };
    const coloring = el<HTMLInputElement>("toggle-group-color");
    coloring.checked = this.state.colorMode === "group";
    coloring.onchange = () => {
      // pure client-side recolor: no service request
      this.state.colorMode = coloring.checked ? "group" : "class";
      this.syncFragment();
      this.redrawScatter();
      if (this.projection) this.redrawProjection();
    };
    const mstEdges = el<HTMLInputElement>("toggle-mst-edges");
    mstEdges.checked = this.state.showMstEdges;
    mstEdges.onchange = () => {
      this.state.showMstEdges = mstEdges.checked;
      this.syncFragment();
      this.redrawProjection();
    };
    const contours = el<HTMLInputElement>("toggle-contours");
    contours.checked = this.state.showContours;
    contours.onchange = () => {
      this.state.showContours = contours.checked;
      this.syncFragment();
      this.redrawProjection();
    };

    for (const [id, key] of [
      ["slider-dims", "pcaDims"],
      ["slider-degree", "degree"],
      ["slider-bandwidth", "bandwidth"],
    ] as const) {
      const slider = el<HTMLInputElement>(id);
      if (key === "bandwidth" && this.state.bandwidth !== null) {
        slider.value = String(this.state.bandwidth);
      } else if (key !== "bandwidth") {
        slider.value = String(this.state[key]);
      }
      slider.oninput = () => {
        const value = Number(slider.value);
        if (key === "bandwidth") this.state.bandwidth = value > 0 ? value : null;
        else this.state[key] = value;
        this.syncFragment();
        this.requestProjection();
      };
    }

    el<HTMLButtonElement>("run-test").onclick = () => void this.runTest();
    el<HTMLButtonElement>("lasso-mode").onclick = () => {
      this.lassoDraft = [];
      this.lassoActive = null;
      this.notice("lasso: draw two boundaries, one per group");
    };

    const canvas = this.scatter.canvas;
    canvas.onclick = (event) => this.onScatterClick(event);
    canvas.onmousedown = (event) => {
      if (this.lassoDraft.length >= 2) return;
      if (!event.shiftKey) return;
      this.lassoActive = [];
      this.lassoDraft.push(this.lassoActive);
    };
    canvas.onmousemove = (event) => {
      if (!this.lassoActive || !this.session) return;
      const scale = this.redrawScatter();
      const rect = canvas.getBoundingClientRect();
      this.lassoActive.push(scale.invert([event.clientX - rect.left, event.clientY - rect.top]));
    };
    canvas.onmouseup = () => {
      if (!this.lassoActive) return;
      this.lassoActive = null;
      if (this.lassoDraft.length === 2) void this.selectLasso();
    };
  }

  onScatterClick(event: MouseEvent): void {
    if (!this.session || this.lassoDraft.length > 0) return;
    const rect = this.scatter.canvas.getBoundingClientRect();
    const scale = this.redrawScatter();
    const result = this.picker.click(this.session, scale, [
      event.clientX - rect.left,
      event.clientY - rect.top,
    ]);
    if (result.kind === "first") this.notice(`endpoint ${result.rowId}; pick the second`);
    else if (result.kind === "duplicate") this.notice("endpoints must differ; pick another point");
    else if (result.kind === "pair") void this.selectPath(result.a, result.b);
  }

  async selectPath(a: string, b: string): Promise<void> {
    try {
      this.selection = await api.selectPath(this.state.sessionId, a, b);
      this.state.endpoints = [a, b];
      this.syncFragment();
      this.notice(`selected classes of ${a} and ${b}`);
      await this.afterSelection();
    } catch (error) {
      this.report(error);
    }
  }

  async selectLasso(): Promise<void> {
    try {
      this.selection = await api.selectGroups(this.state.sessionId, this.lassoDraft);
      this.lassoDraft = [];
      this.state.endpoints = null;
      this.syncFragment();
      this.notice("selected custom groups");
      await this.afterSelection();
    } catch (error) {
      this.lassoDraft = [];
      this.report(error);
    }
  }

  async afterSelection(): Promise<void> {
    this.redrawScatter();
    await Promise.all([this.project(), this.runTest(), this.loadHeatmap(), this.loadMeta()]);
  }

  async project(): Promise<void> {
    if (!this.selection) return;
    try {
      this.projection = await api.project(this.state.sessionId, {
        pca_dims: this.state.pcaDims,
        degree: this.state.degree,
        bandwidth: this.state.bandwidth,
      });
      this.redrawProjection();
    } catch (error) {
      this.report(error);
    }
  }

  async runTest(): Promise<void> {
    if (!this.selection) return;
    try {
      const payload = await api.runTest(this.state.sessionId, { seed: this.state.seed });
      this.state.seed = payload.seed;
      this.syncFragment();
      const target = el("test-panel");
      target.innerHTML = "";
      for (const item of testPanelItems(payload)) {
        const row = document.createElement("div");
        row.textContent = `${item.label}: ${item.text}`;
        target.appendChild(row);
      }
    } catch (error) {
      this.report(error);
    }
  }

  async loadHeatmap(rows?: string[], features?: string[]): Promise<void> {
    try {
      this.heatmap = await api.heatmap(this.state.sessionId, rows, features);
      const { canvas, ctx } = this.heatmapCanvas;
      const layout = renderHeatmap(ctx, this.heatmap, canvas.width, canvas.height);
      let dragStart: Point | null = null;
      canvas.onmousedown = (event) => {
        const rect = canvas.getBoundingClientRect();
        dragStart = [event.clientX - rect.left, event.clientY - rect.top];
      };
      canvas.onmouseup = (event) => {
        if (!dragStart || !this.heatmap) return;
        const rect = canvas.getBoundingClientRect();
        const subset = dragToSubsets(
          this.heatmap,
          heatmapLayout(this.heatmap, canvas.width, canvas.height),
          dragStart[0],
          dragStart[1],
          event.clientX - rect.left,
          event.clientY - rect.top
        );
        dragStart = null;
        void this.loadHeatmap(subset.rows, subset.features);
      };
      void layout;
    } catch (error) {
      this.report(error);
    }
  }

  async loadMeta(): Promise<void> {
    if (!this.session?.has_meta) return;
    try {
      const payload = await api.meta(this.state.sessionId);
      const target = el("meta-panel");
      target.innerHTML = "";
      for (const item of metaPanelItems(payload)) {
        const row = document.createElement("div");
        row.textContent = `${item.label}: ${item.text}`;
        target.appendChild(row);
      }
    } catch (error) {
      this.report(error);
    }
  }

  redrawScatter() {
    const { canvas, ctx } = this.scatter;
    return renderScatter(
      ctx,
      {
        session: this.session!,
        selection: this.selection,
        colorMode: this.state.colorMode,
        showMedoidTree: this.state.showMedoidTree,
        showPath: this.state.showPath,
        lassoDraft: this.lassoDraft,
      },
      { width: canvas.width, height: canvas.height }
    );
  }

  redrawProjection(): void {
    if (!this.projection) return;
    const { canvas, ctx } = this.projectionCanvas;
    renderProjection(ctx, this.projection, {
      width: canvas.width,
      height: canvas.height,
      showMstEdges: this.state.showMstEdges,
      showContours: this.state.showContours,
    });
  }

  report(error: unknown): void {
    if (error instanceof ApiError) this.notice(`service: ${error.message}`);
    else if (error instanceof DOMException && error.name === "AbortError") return;
    else this.notice(String(error));
  }
}

async function boot(): Promise<void> {
  const restored = decodeState(window.location.hash);
  let state = restored;
  if (!state) {
    const sessions = await api.listSessions();
    if (!sessions.sessions.length) {
      el("notice").textContent = "no sessions on the service; start it with --data/--labels";
      return;
    }
    state = { sessionId: sessions.sessions[0], ...DEFAULT_STATE };
  }
  const app = new App(state);
  await app.start();
}

window.addEventListener("DOMContentLoaded", () => void boot());
