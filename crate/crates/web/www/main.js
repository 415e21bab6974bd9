import init, { rml_curve, verify_family, marshall_olkin_limit } from "./pkg/maxcorr_web.js";

const $ = (id) => document.getElementById(id);
const nums = (text) => text.split(",").map((s) => Number(s.trim()));

function axes(ctx, w, h, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, pad);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad, h - pad);
  ctx.stroke();
}

function drawCurve() {
  const canvas = $("c-plot");
  const ctx = canvas.getContext("2d");
  const [w, h, pad] = [canvas.width, canvas.height, 30];
  axes(ctx, w, h, pad);
  let ys;
  try {
    ys = rml_curve(+$("c-n").value, +$("c-m").value, +$("c-l").value, 401);
    $("c-msg").textContent = `R(0.5) = ${ys[200].toFixed(6)}, limit at p = 1: ${ys[400].toFixed(6)}`;
    $("c-msg").className = "";
  } catch (e) {
    $("c-msg").textContent = e.message;
    $("c-msg").className = "err";
    return;
  }
  const x = (i) => pad + (i / (ys.length - 1)) * (w - 2 * pad);
  const y = (v) => h - pad - v * (h - 2 * pad);
  ctx.fillStyle = "#555";
  ctx.fillText("0", pad - 12, h - pad + 4);
  ctx.fillText("1", pad - 12, pad + 4);
  ctx.fillText("p", w - pad + 6, h - pad + 4);
  ctx.strokeStyle = "#1f5fa8";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ys.forEach((v, i) => (i ? ctx.lineTo(x(i), y(v)) : ctx.moveTo(x(i), y(v))));
  ctx.stroke();
  ctx.lineWidth = 1;
}

function drawScores(report) {
  const canvas = $("v-plot");
  const ctx = canvas.getContext("2d");
  const [w, h, pad] = [canvas.width, canvas.height, 24];
  axes(ctx, w, h, pad);
  const series = [
    [report.spectral.left_fn, "#1f5fa8"],
    [report.spectral.right_fn, "#c2571a"],
  ];
  const all = series.flatMap(([f]) => f);
  const xs = all.map((p) => p[0]);
  const vs = all.map((p) => p[1]);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [v0, v1] = [Math.min(...vs), Math.max(...vs)];
  const x = (t) => pad + ((t - x0) / Math.max(x1 - x0, 1)) * (w - 2 * pad);
  const y = (v) => h - pad - ((v - v0) / Math.max(v1 - v0, 1e-12)) * (h - 2 * pad);
  for (const [f, color] of series) {
    ctx.strokeStyle = color;
    ctx.beginPath();
    f.forEach(([t, v], i) => (i ? ctx.lineTo(x(t), y(v)) : ctx.moveTo(x(t), y(v))));
    ctx.stroke();
  }
  ctx.fillStyle = "#555";
  ctx.fillText("optimal scores: left (blue), right (orange)", pad + 6, pad);
}

function runVerify() {
  const out = $("v-out");
  try {
    const s = nums($("v-scheme").value);
    const report = JSON.parse(
      verify_family($("v-family").value, new Float64Array(nums($("v-params").value)), s[0], s[1], s[2]),
    );
    out.className = "";
    out.textContent = [
      `table        ${report.table_shape[0]} x ${report.table_shape[1]}`,
      `closed form  ${report.closed_form}`,
      `svd oracle   ${report.svd}`,
      `ace oracle   ${report.ace}`,
      `max diff     ${report.max_diff.toExponential(2)} (tolerance ${report.tolerance.toExponential(2)})`,
      `upper bound  ${report.upper_bound}`,
      `status       ${report.passed ? "pass" : "FAIL"}`,
    ].join("\n");
    drawScores(report);
  } catch (e) {
    out.className = "err";
    out.textContent = e.message;
  }
}

function runMo() {
  const out = $("m-out");
  const h = 10 ** +$("m-h").value;
  try {
    const [l1, l2, l3] = nums($("m-rates").value);
    const [discrete, limit] = marshall_olkin_limit(l1, l2, l3, h);
    out.className = "";
    out.textContent = `h = ${h.toExponential(3)}\ngeometric grid  ${discrete}\nlimit           ${limit}\ngap             ${Math.abs(discrete - limit).toExponential(3)}`;
  } catch (e) {
    out.className = "err";
    out.textContent = e.message;
  }
}

await init();
for (const id of ["c-n", "c-m", "c-l"]) $(id).addEventListener("input", drawCurve);
$("v-run").addEventListener("click", runVerify);
$("m-h").addEventListener("input", runMo);
$("m-rates").addEventListener("input", runMo);
drawCurve();
runVerify();
runMo();
