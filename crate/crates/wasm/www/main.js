// Expects the wasm-bindgen `--target web` output in ./pkg.
import init, { spin_x_curve, helstrom_explorer, erasure_gap } from "./pkg/rtl_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function show(id, fn) {
  const el = $(id);
  try {
    const value = JSON.parse(fn());
    el.classList.remove("err");
    el.textContent = JSON.stringify(value, null, 2);
    return value;
  } catch (e) {
    el.classList.add("err");
    el.textContent = String(e.message ?? e);
    return null;
  }
}

function plotCurve(curve) {
  const cv = $("sx-plot");
  const g = cv.getContext("2d");
  g.clearRect(0, 0, cv.width, cv.height);
  if (!curve) return;
  const pts = curve.points.filter((p) => p.bound !== null && p.bound > 0);
  if (pts.length < 2) return;
  const pad = 40;
  const lx = pts.map((p) => Math.log10(p.epsilon));
  const ly = pts.map((p) => Math.log10(p.bound));
  const [x0, x1] = [Math.min(...lx), Math.max(...lx)];
  const [y0, y1] = [Math.min(...ly), Math.max(...ly)];
  const sx = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (cv.width - 2 * pad);
  const sy = (y) => cv.height - pad - ((y - y0) / (y1 - y0 || 1)) * (cv.height - 2 * pad);
  g.strokeStyle = "#999";
  g.strokeRect(pad, pad, cv.width - 2 * pad, cv.height - 2 * pad);
  g.fillStyle = "#444";
  g.font = "12px sans-serif";
  g.fillText(`log10 error  [${x0.toFixed(1)}, ${x1.toFixed(1)}]`, pad, cv.height - 12);
  g.fillText(`log10 bound  [${y0.toFixed(2)}, ${y1.toFixed(2)}]`, pad, 24);
  g.strokeStyle = "#1565c0";
  g.lineWidth = 2;
  g.beginPath();
  lx.forEach((x, i) => (i ? g.lineTo(sx(x), sy(ly[i])) : g.moveTo(sx(x), sy(ly[i]))));
  g.stroke();
}

function plotBloch(sample) {
  const cv = $("hx-plot");
  const g = cv.getContext("2d");
  const c = cv.width / 2;
  const R = c - 20;
  g.clearRect(0, 0, cv.width, cv.height);
  g.strokeStyle = "#999";
  g.beginPath();
  g.arc(c, c, R, 0, 2 * Math.PI);
  g.stroke();
  const dot = (r, a, color) => {
    g.fillStyle = color;
    g.beginPath();
    g.arc(c + R * r * Math.sin(a), c - R * r * Math.cos(a), 6, 0, 2 * Math.PI);
    g.fill();
  };
  dot(num("hx-r1"), num("hx-a1"), "#1565c0");
  dot(num("hx-r2"), num("hx-a2"), "#c62828");
  if (sample) {
    const [t, x, z] = sample.effect;
    const n = Math.hypot(x, z);
    if (n > 1e-12 && t > 0) {
      g.strokeStyle = "#2e7d32";
      g.beginPath();
      g.moveTo(c, c);
      g.lineTo(c + (R * x) / n, c - (R * z) / n);
      g.stroke();
    }
  }
}

function updateSpin() {
  plotCurve(show("sx-out", () => spin_x_curve(num("sx-hw"), num("sx-from"), num("sx-to"), num("sx-n"))));
}

function updateHelstrom() {
  $("hx-p-v").textContent = num("hx-p").toFixed(2);
  plotBloch(show("hx-out", () => helstrom_explorer(num("hx-p"), num("hx-r1"), num("hx-a1"), num("hx-r2"), num("hx-a2"))));
}

function updateErasure() {
  show("eg-out", () => erasure_gap(num("eg-gap"), num("eg-beta"), num("eg-eps")));
}

await init();
$("status").textContent = "";
for (const id of ["sx-hw", "sx-from", "sx-to", "sx-n"]) $(id).addEventListener("input", updateSpin);
for (const id of ["hx-p", "hx-r1", "hx-a1", "hx-r2", "hx-a2"]) $(id).addEventListener("input", updateHelstrom);
for (const id of ["eg-gap", "eg-beta", "eg-eps"]) $(id).addEventListener("input", updateErasure);
updateSpin();
updateHelstrom();
updateErasure();
