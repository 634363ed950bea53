import init, { curve_profile, recovery_sweep, grid_spreads, rating_symbols } from "./pkg/credit_curve_wasm.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];
const num = (id) => parseFloat(document.getElementById(id).value);

// series: [{ x, y, label }]
function plot(canvasId, series, title, opts = {}) {
  const cv = document.getElementById(canvasId);
  const g = cv.getContext("2d");
  const pad = { l: 56, r: 12, t: 22, b: 28 };
  g.clearRect(0, 0, cv.width, cv.height);
  const xs = series.flatMap((s) => s.x), ys = series.flatMap((s) => s.y).filter(Number.isFinite);
  if (!ys.length) return;
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (opts.zero) { y0 = Math.min(y0, 0); y1 = Math.max(y1, 0); }
  if (y1 === y0) { y1 += 1; y0 -= 1; }
  const W = cv.width - pad.l - pad.r, H = cv.height - pad.t - pad.b;
  const px = (x) => pad.l + ((x - x0) / (x1 - x0)) * W;
  const py = (y) => pad.t + (1 - (y - y0) / (y1 - y0)) * H;
  g.strokeStyle = "#999"; g.fillStyle = "#333"; g.font = "11px sans-serif";
  g.strokeRect(pad.l, pad.t, W, H);
  for (let i = 0; i <= 4; i++) {
    const y = y0 + ((y1 - y0) * i) / 4, x = x0 + ((x1 - x0) * i) / 4;
    g.fillText(y.toPrecision(3), 4, py(y) + 4);
    g.fillText(x.toPrecision(3), px(x) - 10, cv.height - 10);
  }
  if (opts.zero && y0 < 0) {
    g.beginPath(); g.moveTo(pad.l, py(0)); g.lineTo(pad.l + W, py(0)); g.stroke();
  }
  g.fillText(title, pad.l, 14);
  series.forEach((s, k) => {
    g.strokeStyle = s.color || COLORS[k % COLORS.length];
    g.beginPath();
    s.x.forEach((x, i) => (i ? g.lineTo(px(x), py(s.y[i])) : g.moveTo(px(x), py(s.y[i]))));
    g.stroke();
    if (s.label) { g.fillStyle = g.strokeStyle; g.fillText(s.label, pad.l + W - 110, pad.t + 14 + 13 * k); }
  });
  if (opts.marker !== undefined && Number.isFinite(opts.marker)) {
    g.strokeStyle = "#888"; g.setLineDash([4, 3]);
    g.beginPath(); g.moveTo(px(opts.marker), pad.t); g.lineTo(px(opts.marker), pad.t + H); g.stroke();
    g.setLineDash([]);
  }
}

function guarded(outId, fn) {
  const out = document.getElementById(outId);
  try { out.className = "out"; out.textContent = fn() || ""; }
  catch (e) { out.className = "out err"; out.textContent = String(e.message || e); }
}

function drawProfile() {
  guarded("p-out", () => {
    const p = curve_profile(num("p-a"), num("p-b"), num("p-c"), num("p-r"), num("p-rec"), num("p-t"));
    const t = Array.from(p.tenors);
    plot("p-hazard", [{ x: t, y: Array.from(p.hazard), label: "forward hazard" }], "forward hazard");
    plot("p-spread", [{ x: t, y: Array.from(p.spread_bp), label: "par spread bp" }], "par CDS spread (bp)");
    const q = Array.from(p.survival);
    return `survival to ${t[t.length - 1]}y: ${q[q.length - 1].toFixed(4)}`;
  });
}

function drawSweep() {
  guarded("s-out", () => {
    const s = recovery_sweep(
      new Float64Array([num("s-c1"), num("s-t1"), num("s-p1")]),
      new Float64Array([num("s-c2"), num("s-t2"), num("s-p2")]),
      num("s-r"),
    );
    const R = Array.from(s.recovery).map((r) => r * 100);
    const x = s.crossover * 100;
    plot("s-hazard", [{ x: R, y: Array.from(s.hazard), label: "balancing hazard" }], "flat hazard vs recovery (%)", { marker: x });
    plot("s-resid", [
      { x: R, y: Array.from(s.residual_first), label: "bond 1 dP" },
      { x: R, y: Array.from(s.residual_second), label: "bond 2 dP" },
    ], "price residual (pts, + = cheap)", { zero: true, marker: x });
    return Number.isFinite(x)
      ? `single flat hazard fits both at recovery ${x.toFixed(2)}%, hazard ${s.crossover_hazard.toFixed(4)}`
      : "no recovery in [0, 95%] fits both bonds";
  });
}

function drawGrid() {
  guarded("g-out", () => {
    const anchors = new Float64Array([0, 1, 2, 3, 4, 5].map((i) => num(`g-${i}`)));
    const tenors = Array.from({ length: 60 }, (_, i) => 0.5 * (i + 1));
    const s = grid_spreads(anchors, num("g-c"), num("g-r"), new Float64Array(tenors), num("g-f"));
    const sym = rating_symbols();
    const shown = ["AA", "A", "BBB", "BB", "B"];
    plot("g-plot", shown.map((r) => {
      const k = sym.indexOf(r);
      return { x: tenors, y: Array.from(s.slice(k * tenors.length, (k + 1) * tenors.length)), label: r };
    }), "par spread by rating (bp)");
    const at5 = sym.map((r, k) => `${r} ${s[k * tenors.length + 9].toFixed(0)}`);
    return "5y: " + at5.join("  ");
  });
}

await init();
for (const [sec, draw] of [["profile", drawProfile], ["sweep", drawSweep], ["grid", drawGrid]]) {
  document.querySelectorAll(`#${sec} input`).forEach((el) => el.addEventListener("input", draw));
  draw();
}
