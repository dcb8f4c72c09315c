import init, { check, oracle, randomGraph } from "./pkg/planarity_ht_web.js";

const $ = (id) => document.getElementById(id);

function show(text, svg) {
  $("result").textContent = text;
  $("picture").innerHTML = svg ?? "";
}

function run(f) {
  try {
    f();
  } catch (e) {
    show(`error: ${e}`, null);
  }
}

await init();

$("check").onclick = () => run(() => {
  const r = JSON.parse(check($("graph").value, $("mode").value));
  const verdict = r.planar ? "planar" : "not planar";
  const extra = r.planar
    ? `\nwitness: subdivided star form, ${r.crossings} crossings, every independent pair even`
    : "";
  show(`${$("mode").value} ${verdict} (${r.vars} variables, ${r.xors} equations)${extra}`, r.svg);
});

$("oracle").onclick = () => run(() => {
  const r = JSON.parse(oracle($("graph").value, $("mode").value, Number($("budget").value)));
  show(`${$("mode").value} ${r.planar ? "planar" : "not planar"} after ${r.states} states`, r.svg);
});

$("random").onclick = () => run(() => {
  const seed = Number($("seed").value);
  $("graph").value = randomGraph(seed, Number($("levels").value), Number($("per").value), Number($("density").value));
  $("seed").value = seed + 1;
  show("", null);
});
