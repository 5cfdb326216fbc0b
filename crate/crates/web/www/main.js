import init, { trace, sweep, classes } from "./pkg/sqw_web.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#555"];

// Draws named series against a shared x array. `series` entries are
// { name, y, color, dash }.
function plot(canvas, x, series, { yMin, yMax, xLabel } = {}) {
  const dpr = window.devicePixelRatio || 1;
  const w = canvas.clientWidth, h = canvas.clientHeight;
  canvas.width = w * dpr;
  canvas.height = h * dpr;
  const g = canvas.getContext("2d");
  g.scale(dpr, dpr);
  g.clearRect(0, 0, w, h);

  const finite = series.flatMap((s) => s.y).filter(Number.isFinite);
  const lo = yMin ?? Math.min(...finite);
  let hi = yMax ?? Math.max(...finite);
  if (hi <= lo) hi = lo + 1;
  const x0 = x[0], x1 = x[x.length - 1] === x0 ? x0 + 1 : x[x.length - 1];
  const pad = { l: 52, r: 12, t: 10, b: 32 };
  const px = (v) => pad.l + ((v - x0) / (x1 - x0)) * (w - pad.l - pad.r);
  const py = (v) => h - pad.b - ((v - lo) / (hi - lo)) * (h - pad.t - pad.b);

  g.strokeStyle = "#ccc";
  g.fillStyle = "#444";
  g.font = "11px system-ui, sans-serif";
  for (let i = 0; i <= 4; i++) {
    const v = lo + ((hi - lo) * i) / 4;
    g.beginPath();
    g.moveTo(pad.l, py(v));
    g.lineTo(w - pad.r, py(v));
    g.stroke();
    g.fillText(v.toPrecision(3), 4, py(v) + 4);
  }
  for (let i = 0; i <= 5; i++) {
    const v = x0 + ((x1 - x0) * i) / 5;
    g.fillText(Number(v.toPrecision(3)).toString(), px(v) - 8, h - pad.b + 14);
  }
  if (xLabel) g.fillText(xLabel, w - pad.r - 40, h - 4);

  for (const s of series) {
    g.strokeStyle = s.color;
    g.lineWidth = 1.6;
    g.setLineDash(s.dash ? [6, 4] : []);
    g.beginPath();
    let pen = false;
    s.y.forEach((v, i) => {
      if (!Number.isFinite(v)) {
        pen = false;
        return;
      }
      const cx = px(x[i]), cy = py(Math.min(Math.max(v, lo), hi));
      pen ? g.lineTo(cx, cy) : g.moveTo(cx, cy);
      pen = true;
    });
    g.stroke();
  }
  g.setLineDash([]);
}

function legend(el, series) {
  el.innerHTML = series
    .map((s) => `<span><i style="background:${s.color}"></i>${s.name}</span>`)
    .join("");
}

function values(form) {
  const out = {};
  for (const el of form.elements) {
    if (el.name && el.tagName === "INPUT") out[el.name] = Number(el.value);
  }
  return out;
}

function wire(sectionId, render) {
  const section = document.getElementById(sectionId);
  const form = section.querySelector("form");
  const error = section.querySelector(".error");
  const run = () => {
    const phiOut = form.elements.namedItem("phi_out");
    const args = values(form);
    if (phiOut) phiOut.value = `${(args.phi / Math.PI).toFixed(3)}π`;
    try {
      render(section, args);
      error.textContent = "";
    } catch (e) {
      error.textContent = e.message ?? String(e);
    }
  };
  form.addEventListener("input", run);
  run();
}

function renderTrace(section, { n, v, phi, steps }) {
  const d = JSON.parse(trace(n, v, phi, steps));
  const series = [
    { name: "success probability", y: d.p_success, color: COLORS[0] },
    { name: "relative-entropy coherence (normalized)", y: d.c_r_norm, color: COLORS[1] },
    { name: "l1 coherence (normalized)", y: d.c_l_norm, color: COLORS[2] },
  ];
  plot(section.querySelector("canvas"), d.step, series, { yMin: 0, yMax: 1, xLabel: "step" });
  legend(section.querySelector(".legend"), series);
}

function renderSweep(section, { n, v, count }) {
  const d = JSON.parse(sweep(n, v, count));
  const upper = [
    { name: "max success probability", y: d.max_p, color: COLORS[0] },
    { name: "relative-entropy coherence at max", y: d.min_c_r_norm, color: COLORS[1] },
    { name: "l1 coherence at max", y: d.min_c_l_norm, color: COLORS[2] },
  ];
  plot(section.querySelector("canvas.upper"), d.phi, upper, { yMin: 0, yMax: 1, xLabel: "φ" });
  legend(section.querySelector(".legend.upper"), upper);
  const flat = (c) => d.phi.map(() => c);
  const lower = [
    { name: "expected queries (best m)", y: d.avg_queries, color: COLORS[3] },
    { name: `classical blind (${d.blind.toFixed(2)})`, y: flat(d.blind), color: COLORS[5], dash: true },
    { name: `classical with memory (${d.memory.toFixed(2)})`, y: flat(d.memory), color: "#000", dash: true },
  ];
  plot(section.querySelector("canvas.lower"), d.phi, lower, { yMin: 0, xLabel: "φ" });
  legend(section.querySelector(".legend.lower"), lower);
}

function renderClasses(section, { n, v, phi, steps }) {
  const d = JSON.parse(classes(n, v, phi, steps));
  const series = [
    { name: "normal → marked", y: d.p_in, color: COLORS[0] },
    { name: "marked → normal", y: d.p_out, color: COLORS[1] },
    { name: "normal → normal", y: d.p_nn, color: COLORS[2] },
    { name: "uniform mixture", y: d.p_total, color: COLORS[5], dash: true },
  ];
  if (d.p_mm) series.splice(3, 0, { name: "marked → marked", y: d.p_mm, color: COLORS[3] });
  plot(section.querySelector("canvas"), d.step, series, { yMin: 0, yMax: 1, xLabel: "step" });
  legend(section.querySelector(".legend"), series);
}

await init();
wire("trace", renderTrace);
wire("sweep", renderSweep);
wire("classes", renderClasses);
