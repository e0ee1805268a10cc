import init, { eigenvalue_curve, chsh_curve, spin_vector } from "./pkg/relspin_web.js";

const MASS = 1.0;
const COLORS = { pl: "#c0392b", wigner: "#2471a3" };
const $ = (id) => document.getElementById(id);

function plot(canvas, series, yMin, yMax, guide) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 30;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, 10, w - pad - 10, h - pad - 10);
  ctx.fillStyle = "#555";
  ctx.fillText(yMax.toFixed(2), 2, 16);
  ctx.fillText(yMin.toFixed(2), 2, h - pad);
  const y = (v) => 10 + (h - pad - 10) * (yMax - v) / (yMax - yMin);
  if (guide !== undefined) {
    ctx.setLineDash([4, 4]);
    ctx.beginPath();
    ctx.moveTo(pad, y(guide));
    ctx.lineTo(w - 10, y(guide));
    ctx.stroke();
    ctx.setLineDash([]);
  }
  for (const [color, values] of series) {
    ctx.strokeStyle = color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    values.forEach((v, i) => {
      const x = pad + (w - pad - 10) * i / (values.length - 1);
      i === 0 ? ctx.moveTo(x, y(v)) : ctx.lineTo(x, y(v));
    });
    ctx.stroke();
  }
}

function drawEigen() {
  const p = +$("eig-p").value;
  $("eig-p-out").textContent = p.toFixed(2);
  plot($("eig"), [
    [COLORS.wigner, eigenvalue_curve("wigner", MASS, p, 181)],
    [COLORS.pl, eigenvalue_curve("pl", MASS, p, 181)],
  ], 0, 0.55);
}

function drawChsh() {
  const p = +$("chsh-p").value;
  $("chsh-p-out").textContent = p.toFixed(1);
  plot($("chsh"), [
    [COLORS.wigner, chsh_curve("wigner", MASS, p, 200)],
    [COLORS.pl, chsh_curve("pl", MASS, p, 200)],
  ], 0, 3, 2);
}

function drawBloch() {
  const canvas = $("bloch");
  const ctx = canvas.getContext("2d");
  const c = canvas.width / 2;
  const r = c - 20;
  const args = [MASS, +$("bloch-p").value, +$("bloch-polar").value, +$("bloch-az").value];
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#bbb";
  ctx.beginPath();
  ctx.arc(c, c, r, 0, 2 * Math.PI);
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.fillText("x", canvas.width - 14, c - 4);
  ctx.fillText("z (momentum)", c + 4, 14);
  const lines = [];
  for (const kind of ["wigner", "pl"]) {
    const [sx, sy, sz] = spin_vector(kind, ...args);
    ctx.strokeStyle = COLORS[kind];
    ctx.lineWidth = 3;
    ctx.beginPath();
    ctx.moveTo(c, c);
    ctx.lineTo(c + 2 * r * sx, c - 2 * r * sz);
    ctx.stroke();
    lines.push(`${kind}: (${sx.toFixed(4)}, ${sy.toFixed(4)}, ${sz.toFixed(4)})`);
  }
  $("bloch-out").textContent = lines.join("   ");
}

await init();
$("eig-p").addEventListener("input", drawEigen);
$("chsh-p").addEventListener("input", drawChsh);
for (const id of ["bloch-p", "bloch-polar", "bloch-az"]) $(id).addEventListener("input", drawBloch);
drawEigen();
drawChsh();
drawBloch();
