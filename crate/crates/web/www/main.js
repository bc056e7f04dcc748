import init, { degrees, hook_solve, real_rank } from "./pkg/rootloci_web.js";

const $ = (id) => document.getElementById(id);
const fmt = (x) => (typeof x === "number" ? Number(x.toPrecision(6)).toString() : String(x ?? "-"));

function show(out, build) {
  out.replaceChildren();
  try {
    out.append(build());
  } catch (e) {
    const p = document.createElement("p");
    p.className = "error";
    p.textContent = String(e);
    out.append(p);
  }
}

function table(header, rows) {
  const t = document.createElement("table");
  const tr = t.insertRow();
  for (const h of header) {
    const th = document.createElement("th");
    th.textContent = h;
    tr.append(th);
  }
  for (const r of rows) {
    const row = t.insertRow();
    for (const c of r) row.insertCell().textContent = fmt(c);
  }
  return t;
}

function runDegrees() {
  show($("deg-out"), () => {
    const r = JSON.parse(degrees($("deg-partition").value));
    return table(["field", "value"], [
      ["degree", r.hilbert_degree],
      ["dual degree", r.dual_degree],
      ["dual hooks", r.dual_hooks.map((p) => `{${p.join(",")}}`).join(" ")],
      ["ED special", r.ed_special],
      ["ED generic", r.ed_generic],
      ["multidegree", r.multidegree ? r.multidegree.join(" ") : null],
    ]);
  });
}

function runHook() {
  show($("hook-out"), () => {
    const a = Number($("hook-a").value);
    const r = JSON.parse(hook_solve($("hook-coeffs").value, $("hook-basis").value, a));
    const rows = r.critical_points.map((d, i) => [
      i,
      `(${fmt(d.roots[0].point.s)} : ${fmt(d.roots[0].point.t)})`,
      d.dist_sq_primal,
      d.dist_sq_dual,
      d.class_primal,
      d.class_dual,
    ]);
    const div = document.createElement("div");
    const p = document.createElement("p");
    p.textContent = `|h|^2 = ${fmt(r.norm_sq)}, ${rows.length} real critical points`;
    div.append(p, table(["#", "root", "|h-f|^2", "|h-g|^2", "primal", "dual"], rows));
    return div;
  });
}

function runRank() {
  show($("rank-out"), () => {
    const r = JSON.parse(real_rank($("rank-coeffs").value, $("rank-basis").value));
    const pre = document.createElement("pre");
    const component = r.report?.boundary_component;
    pre.textContent = `verdict: ${r.verdict}` + (component ? `\ncomponent: ${component}` : "");
    return pre;
  });
}

await init();
$("deg-run").onclick = runDegrees;
$("hook-run").onclick = runHook;
$("rank-run").onclick = runRank;
runDegrees();
