import init, { gaussian_mi_demo, sample_csv, Explorer } from "./pkg/featnet_wasm.js";

const $ = (id) => document.getElementById(id);
const KIND_COLOR = { discrete: "#d95f02", continuous: "#1b9e77" };

let explorer = null;
let graph = null;
let sweep = null;
let selected = null;

function showError(e) {
  $("error").textContent = e ? String(e.message ?? e) : "";
}

// viridis-like ramp, t in [0, 1]
function ramp(t) {
  const stops = [[68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37]];
  const x = Math.min(Math.max(t, 0), 1) * (stops.length - 1);
  const i = Math.min(Math.floor(x), stops.length - 2);
  const f = x - i;
  const c = stops[i].map((v, j) => Math.round(v + f * (stops[i + 1][j] - v)));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

function scaler(lo, hi, a, b) {
  const span = hi - lo || 1;
  return (v) => a + ((v - lo) / span) * (b - a);
}

// ---- Gaussian estimator panel

function runGaussian() {
  const rho = Number($("rho").value);
  $("rho-value").textContent = rho.toFixed(2);
  try {
    const r = JSON.parse(gaussian_mi_demo(rho, Number($("gauss-n").value), Number($("gauss-k").value), 7));
    showError(null);
    $("gauss-result").innerHTML =
      `<p>KSG estimate: <b>${r.estimate.toFixed(4)}</b> nats</p>` +
      `<p>−½ ln(1 − ρ²): <b>${r.analytic.toFixed(4)}</b> nats</p>` +
      `<p class="muted">difference ${(r.estimate - r.analytic).toFixed(4)}</p>`;
    const c = $("gauss-canvas").getContext("2d");
    c.clearRect(0, 0, 320, 320);
    const sx = scaler(-4, 4, 10, 310);
    const sy = scaler(-4, 4, 310, 10);
    c.fillStyle = "rgba(27,158,119,0.5)";
    for (const [x, y] of r.points) c.fillRect(sx(x) - 1.5, sy(y) - 1.5, 3, 3);
  } catch (e) {
    showError(e);
  }
}

// ---- network panel

function loadTable(text) {
  try {
    explorer?.free();
    explorer = new Explorer(text, Number($("threshold").value), Number($("net-k").value), 0);
    sweep = JSON.parse(explorer.sweep_json());
    const slider = $("alpha");
    slider.max = sweep.curve.length - 1;
    slider.disabled = false;
    $("alpha-reset").disabled = false;
    slider.value = sweep.curve.findIndex((p) => p.threshold === sweep.chosen);
    showError(null);
    selected = null;
    refreshGraph(null);
  } catch (e) {
    showError(e);
  }
}

function refreshGraph(alpha) {
  graph = JSON.parse(explorer.graph_json(alpha ?? undefined));
  const m = graph.meta;
  $("alpha-label").textContent =
    `α = ${m.alpha.toPrecision(4)}, ${graph.edges.length} edges, ${m.n_components} components` +
    (alpha === null ? " (sweep maximum)" : "");
  drawGraph();
  drawSweep();
}

const G = 560;
const toPx = (v) => ((v + 1) / 2) * (G - 40) + 20;

function drawGraph() {
  const c = $("graph-canvas").getContext("2d");
  c.clearRect(0, 0, G, G);
  const maxW = Math.max(...graph.edges.map((e) => e.weight), 1e-12);
  for (const e of graph.edges) {
    const a = graph.nodes[e.source];
    const b = graph.nodes[e.target];
    const isSel = selected && selected.source === e.source && selected.target === e.target;
    c.strokeStyle = isSel ? "#c00" : "rgba(80,80,80,0.6)";
    c.lineWidth = 0.5 + 5 * (e.weight / maxW);
    c.beginPath();
    c.moveTo(toPx(a.x), toPx(-a.y));
    c.lineTo(toPx(b.x), toPx(-b.y));
    c.stroke();
  }
  c.font = "11px system-ui";
  for (const n of graph.nodes) {
    c.fillStyle = KIND_COLOR[n.kind];
    c.beginPath();
    c.arc(toPx(n.x), toPx(-n.y), 6, 0, 2 * Math.PI);
    c.fill();
    c.fillStyle = "#333";
    c.fillText(n.name, toPx(n.x) + 8, toPx(-n.y) + 4);
  }
}

function drawSweep() {
  const W = 440, H = 160;
  const c = $("sweep-canvas").getContext("2d");
  c.clearRect(0, 0, W, H);
  const pts = sweep.curve;
  const maxC = Math.max(...pts.map((p) => p.n_components), 1);
  const sx = scaler(0, pts.length - 1, 30, W - 10);
  const sy = scaler(0, maxC, H - 20, 10);
  c.strokeStyle = "#999";
  c.strokeRect(30, 10, W - 40, H - 30);
  c.fillStyle = "#555";
  c.fillText(`C max ${maxC}`, 34, 22);
  c.strokeStyle = "#1b9e77";
  c.beginPath();
  pts.forEach((p, i) => (i ? c.lineTo(sx(i), sy(p.n_components)) : c.moveTo(sx(i), sy(p.n_components))));
  c.stroke();
  const at = Number($("alpha").value);
  c.fillStyle = "#c00";
  c.fillRect(sx(at) - 1, 10, 2, H - 30);
}

function distToSegment(px, py, ax, ay, bx, by) {
  const dx = bx - ax, dy = by - ay;
  const len2 = dx * dx + dy * dy || 1;
  const t = Math.max(0, Math.min(1, ((px - ax) * dx + (py - ay) * dy) / len2));
  return Math.hypot(px - (ax + t * dx), py - (ay + t * dy));
}

function onGraphClick(ev) {
  if (!graph) return;
  const rect = ev.target.getBoundingClientRect();
  const px = ev.clientX - rect.left, py = ev.clientY - rect.top;
  let best = null, bestD = 6;
  for (const e of graph.edges) {
    const a = graph.nodes[e.source], b = graph.nodes[e.target];
    const d = distToSegment(px, py, toPx(a.x), toPx(-a.y), toPx(b.x), toPx(-b.y));
    if (d < bestD) { best = e; bestD = d; }
  }
  if (!best) return;
  selected = best;
  drawGraph();
  try {
    const r = JSON.parse(explorer.chart_json(best.source, best.target));
    drawChart(r.chart);
    $("chart-caption").textContent =
      `${r.chart.type}: ${r.chart.x_feature} × ${r.chart.y_feature}, MI ${r.weight.toFixed(4)} nats, α ${best.alpha.toPrecision(3)}`;
  } catch (e) {
    showError(e);
  }
}

// ---- charts

const CW = 440, CH = 340;

function drawChart(spec) {
  const c = $("chart-canvas").getContext("2d");
  c.clearRect(0, 0, CW, CH);
  c.font = "11px system-ui";
  const p = spec.payload;
  if (p.empty) {
    c.fillStyle = "#777";
    c.fillText(`no chart: ${p.reason}`, 20, 30);
    return;
  }
  if (spec.type === "heatmap") drawHeatmap(c, p);
  else if (spec.type === "ridgeline") drawRidgeline(c, p);
  else drawDensity(c, p);
}

function drawHeatmap(c, p) {
  const nx = p.x_categories.length, ny = p.y_categories.length;
  const max = Math.max(...p.counts.flat(), 1);
  const left = 70, top = 10, w = (CW - left - 10) / nx, h = (CH - top - 40) / ny;
  for (let i = 0; i < nx; i++) {
    for (let j = 0; j < ny; j++) {
      c.fillStyle = ramp(p.counts[i][j] / max);
      c.fillRect(left + i * w, top + j * h, w - 1, h - 1);
    }
  }
  c.fillStyle = "#333";
  p.x_categories.forEach((k, i) => c.fillText(k.slice(0, 8), left + i * w + 2, CH - 22));
  p.y_categories.forEach((k, j) => c.fillText(k.slice(0, 10), 4, top + j * h + h / 2));
}

function drawRidgeline(c, p) {
  const rows = p.categories.length;
  const sx = scaler(p.grid[0], p.grid[p.grid.length - 1], 70, CW - 10);
  const rowH = (CH - 30) / rows;
  const peak = Math.max(...p.densities.filter(Boolean).flat(), 1e-12);
  p.categories.forEach((k, r) => {
    const base = 20 + (r + 1) * rowH;
    c.fillStyle = "#333";
    c.fillText(k.slice(0, 10), 4, base - 2);
    const d = p.densities[r];
    if (d) {
      c.fillStyle = "rgba(27,158,119,0.45)";
      c.beginPath();
      c.moveTo(sx(p.grid[0]), base);
      d.forEach((v, i) => c.lineTo(sx(p.grid[i]), base - (v / peak) * rowH * 1.6));
      c.lineTo(sx(p.grid[p.grid.length - 1]), base);
      c.fill();
    } else {
      c.fillStyle = "#d95f02";
      c.fillRect(sx(p.point_masses[r]) - 1, base - rowH, 2, rowH);
    }
  });
}

function drawDensity(c, p) {
  const nx = p.grid_x.length, ny = p.grid_y.length;
  const max = Math.max(...p.density.flat(), 1e-12);
  const w = (CW - 20) / nx, h = (CH - 20) / ny;
  for (let iy = 0; iy < ny; iy++) {
    for (let ix = 0; ix < nx; ix++) {
      c.fillStyle = ramp(p.density[iy][ix] / max);
      c.fillRect(10 + ix * w, CH - 10 - (iy + 1) * h, w + 0.5, h + 0.5);
    }
  }
  const sx = scaler(p.grid_x[0], p.grid_x[nx - 1], 10, CW - 10);
  const sy = scaler(p.grid_y[0], p.grid_y[ny - 1], CH - 10, 10);
  c.fillStyle = "rgba(255,255,255,0.6)";
  for (const [x, y] of p.points) c.fillRect(sx(x) - 1, sy(y) - 1, 2, 2);
}

// ---- wiring

await init();
for (const id of ["rho", "gauss-n", "gauss-k"]) $(id).addEventListener("input", runGaussian);
$("load-sample").addEventListener("click", () => loadTable(sample_csv(600, 2024)));
$("csv-file").addEventListener("change", async (ev) => {
  const file = ev.target.files[0];
  if (file) loadTable(await file.text());
});
$("alpha").addEventListener("input", (ev) => {
  const point = sweep.curve[Number(ev.target.value)];
  refreshGraph(point.threshold);
});
$("alpha-reset").addEventListener("click", () => {
  $("alpha").value = sweep.curve.findIndex((p) => p.threshold === sweep.chosen);
  refreshGraph(null);
});
$("graph-canvas").addEventListener("click", onGraphClick);
runGaussian();
