/** DOM wiring for the pattern studio.
 *
 * Activation encoding follows the joint-figure convention: brown = activated,
 * gray = deactivated, white outline = trimmed. All numbers shown come from
 * server evaluations; toggles are optimistic and reconciled.
 */
import { StudioApi, ApiError } from "./api.js";
import { polygonPoints, sheetExtent } from "./gridGeometry.js";
import { modeBars, formatValue } from "./panel.js";
import { StudioStore, debounce, keyOf } from "./store.js";
import { heatBars, makespan, powerPolyline, withinBudget } from "./timeline.js";
import type { Address, GridResponse } from "./types.js";

const ACTIVATED = "#8c5a2b";
const DEACTIVATED = "#b9b9b9";

const api = new StudioApi("");
const store = new StudioStore();
let grid: GridResponse | null = null;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function renderGrid(): void {
  if (!grid) return;
  const svg = el<HTMLElement>("grid");
  const { width, height } = sheetExtent(grid.params);
  svg.setAttribute("viewBox", `-2 -2 ${width + 4} ${height + 4}`);
  const cells = grid.cells
    .map((cell) => {
      const k = keyOf(cell.address);
      const trimmed = cell.health === "trimmed";
      const fill = trimmed
        ? "white"
        : store.state.selected.has(k)
          ? ACTIVATED
          : DEACTIVATED;
      return `<polygon points="${polygonPoints(grid!.params, cell.address)}"
        fill="${fill}" stroke="#333" stroke-width="0.35"
        data-addr="${k}" class="${trimmed ? "trimmed" : "cell"}"/>`;
    })
    .join("\n");
  svg.innerHTML = cells;
  for (const poly of Array.from(svg.querySelectorAll("polygon.cell"))) {
    poly.addEventListener("click", () => {
      const [r, c] = (poly.getAttribute("data-addr") ?? "0,0")
        .split(",")
        .map(Number);
      onToggle([r, c]);
    });
  }
}

function renderPanel(): void {
  const panel = el<HTMLElement>("panel");
  const report = store.state.report;
  if (!report) {
    panel.innerHTML = "<em>toggle voxels to evaluate</em>";
    return;
  }
  const rows = modeBars(report)
    .map(
      (b) => `<tr><td>${b.mode}</td>
      <td><div class="bar before" style="width:${(b.beforeFrac * 160).toFixed(0)}px"></div>
          ${formatValue(b.before)}</td>
      <td><div class="bar after" style="width:${(b.afterFrac * 160).toFixed(0)}px"></div>
          ${formatValue(b.after)} ${b.unit}</td>
      <td>-${b.dropPct.toFixed(1)}%</td></tr>`,
    )
    .join("");
  const loc = store.state.localization;
  panel.innerHTML = `
    <table><tr><th>mode</th><th>solid</th><th>activated</th><th>drop</th></tr>${rows}</table>
    <p>dominant mode: <b>${report.dominant_mode}</b>
    ${loc !== null ? ` · localization ${loc.toFixed(3)}` : ""}
    · v${store.state.version}</p>`;
}

const requestEvaluation = debounce(async () => {
  if (!store.beginMutation()) return;
  try {
    const put = await api.putPattern(store.state.version, store.addresses(), "studio");
    store.acceptVersion(put.version);
    const evaluation = await api.evaluate();
    store.acceptEvaluation(evaluation);
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      const fresh = await api.grid();
      store.acceptVersion(fresh.version);
      requestEvaluation();
    } else {
      el<HTMLElement>("panel").innerHTML =
        `<em class="error">${err instanceof Error ? err.message : err}</em>`;
    }
  } finally {
    store.endMutation();
  }
}, 150);

function onToggle(addr: Address): void {
  if (!grid) return;
  const cell = grid.cells.find(
    (c) => c.address[0] === addr[0] && c.address[1] === addr[1],
  );
  if (!cell || cell.health === "trimmed") {
    el<HTMLElement>("panel").innerHTML = "<em>that voxel is trimmed</em>";
    return;
  }
  store.toggle(addr);
  renderGrid();
  requestEvaluation();
}

async function applyPreset(label: string): Promise<void> {
  const { presets } = await api.presets();
  const preset = presets.find((p) => p.label === label);
  if (!preset) return;
  store.setSelection(preset.addresses);
  renderGrid();
  requestEvaluation();
}

async function showTimeline(): Promise<void> {
  const budget = Number(el<HTMLInputElement>("budget").value);
  const out = el<HTMLElement>("timeline");
  try {
    const resp = await api.planSchedule(budget, store.addresses());
    store.acceptVersion(resp.version);
    const schedule = resp.schedule;
    const bars = heatBars(schedule);
    const span = Math.max(makespan(schedule), 1e-9);
    const rows = bars
      .map(
        (b) => `<rect x="${(300 * b.start) / span}" y="${b.row * 10}"
        width="${(300 * (b.end - b.start)) / span}" height="8" fill="${ACTIVATED}"/>`,
      )
      .join("");
    const curve = powerPolyline(schedule, budget, 300, 60);
    const ok = withinBudget(schedule, budget);
    out.innerHTML = `
      <svg viewBox="0 0 300 ${bars.length * 10 + 4}" width="480">${rows}</svg>
      <svg viewBox="0 0 300 64" width="480">
        <polyline points="${curve}" fill="none" stroke="#0072b2" stroke-width="1.5"/>
        <line x1="0" x2="300" y1="4" y2="4" stroke="red" stroke-dasharray="4 3"/>
      </svg>
      <p>makespan ${schedule.makespan_s.toFixed(1)} s ·
      ${ok ? "within budget" : "BUDGET EXCEEDED"} (${budget} W)</p>`;
  } catch (err) {
    if (err instanceof ApiError && err.status === 422) {
      out.innerHTML = `<em class="error">infeasible: ${JSON.stringify(err.body)}</em>`;
    } else {
      throw err;
    }
  }
}

async function boot(): Promise<void> {
  grid = await api.grid();
  store.acceptVersion(grid.version);
  renderGrid();
  renderPanel();
  store.subscribe(renderPanel);
  const presetBox = el<HTMLElement>("presets");
  const { presets } = await api.presets();
  presetBox.innerHTML = presets
    .map((p) => `<button data-preset="${p.label}">${p.label}</button>`)
    .join(" ");
  for (const btn of Array.from(presetBox.querySelectorAll("button"))) {
    btn.addEventListener("click", () =>
      applyPreset(btn.getAttribute("data-preset") ?? ""),
    );
  }
  el<HTMLButtonElement>("plan").addEventListener("click", () => {
    void showTimeline();
  });
  el<HTMLButtonElement>("clear").addEventListener("click", () => {
    store.setSelection([]);
    renderGrid();
    requestEvaluation();
  });
  el<HTMLButtonElement>("export").addEventListener("click", () => {
    const blob = new Blob([store.exportPattern()], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "pattern.json";
    a.click();
    URL.revokeObjectURL(a.href);
  });
}

if (typeof document !== "undefined" && document.getElementById("grid")) {
  void boot();
}
