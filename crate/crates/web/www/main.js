import init, { decide_pi1, frequent, h_phi } from "./pkg/hyperdense_web.js";

const presets = {
  c5: "3 5 4\n0 1 2\n1 2 3\n2 3 4\n0 3 4\n",
  k4: "3 4 4\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n",
  path: "3 4 2\n0 1 2\n1 2 3\n",
};

const $ = (id) => document.getElementById(id);
const pattern = $("pattern");
const out = $("out");

function show(json) {
  const v = JSON.parse(json);
  out.textContent = JSON.stringify(v, null, 2);
}

function timed(label, f) {
  const t0 = performance.now();
  const json = f();
  show(json);
  out.textContent = `${label} (${(performance.now() - t0).toFixed(1)} ms)\n\n` + out.textContent;
}

await init();
pattern.value = presets.c5;
out.textContent = "ready";

document.querySelectorAll("[data-preset]").forEach((b) =>
  b.addEventListener("click", () => { pattern.value = presets[b.dataset.preset]; }));

$("pi1").addEventListener("click", () => timed("ordering search", () => decide_pi1(pattern.value)));
$("frequent").addEventListener("click", () => timed("ternary embedding", () => frequent(pattern.value)));
$("hphi").addEventListener("click", () =>
  timed("colouring hypergraph", () => h_phi(Number($("n").value), Number($("seed").value) >>> 0, pattern.value)));
