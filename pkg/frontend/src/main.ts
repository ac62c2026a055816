// Studio shell: wires the state machine, canvas, choice panel, and toolbar.

import { ApiClient } from "./api";
import { buildScene } from "./scene";
import { Studio, type StudioView } from "./studio";
import { VoxelCanvas } from "./render";
import type { ChoiceDoc, ColorMode } from "./types";

const params = new URLSearchParams(window.location.search);
const api = new ApiClient(params.get("api") ?? "/api");
const studio = new Studio(api);

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text) node.textContent = text;
  return node;
}

function download(name: string, payload: unknown): void {
  const blob = new Blob([JSON.stringify(payload, null, 1)], { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const a = el("a", { href: url, download: name });
  document.body.append(a);
  a.click();
  a.remove();
  URL.revokeObjectURL(url);
}

const root = document.getElementById("app")!;
const banner = el("div", { class: "banner hidden" });
const layout = el("div", { class: "layout" });
const canvas = el("canvas", { width: "900", height: "640", class: "scene" });
const sidebar = el("div", { class: "sidebar" });
root.append(banner, layout);
layout.append(canvas, sidebar);

// -- session controls ---------------------------------------------------------

const sessionBox = el("div", { class: "box" });
sessionBox.append(el("h3", {}, "session"));
const corpusSelect = el("select");
const specSelect = el("select");
for (const v of ["rect", "2d", "3d"]) specSelect.append(el("option", { value: v }, v));
const alphaInput = el("input", { type: "number", value: "1", step: "0.25", min: "0" });
const openButton = el("button", {}, "open from corpus");
sessionBox.append(
  corpusSelect,
  el("label", {}, "spec"),
  specSelect,
  el("label", {}, "alpha"),
  alphaInput,
  openButton,
);
const statusLine = el("div", { class: "status" });
sessionBox.append(statusLine);
sidebar.append(sessionBox);

api
  .listCorpus()
  .then(({ models }) => {
    for (const name of models) corpusSelect.append(el("option", { value: name }, name));
  })
  .catch((err) => showBanner(String(err)));

openButton.addEventListener("click", () => {
  void studio.openSessionFromCorpus(corpusSelect.value, {
    spec: specSelect.value as "rect" | "2d" | "3d",
    alpha: Number(alphaInput.value),
  });
});

// -- view controls -------------------------------------------------------------

const viewBox = el("div", { class: "box" });
viewBox.append(el("h3", {}, "view"));
const modeSelect = el("select");
for (const v of ["shape", "class", "type"]) modeSelect.append(el("option", { value: v }, `color by ${v}`));
const frameButton = el("button", {}, "frame");
viewBox.append(modeSelect, frameButton);
sidebar.append(viewBox);

modeSelect.addEventListener("change", () => studio.setColorMode(modeSelect.value as ColorMode));

// -- toolbar -------------------------------------------------------------------

const toolbar = el("div", { class: "box" });
toolbar.append(el("h3", {}, "actions"));
const undoButton = el("button", {}, "undo");
const enclosureButton = el("button", {}, "enclosure");
const exportModelButton = el("button", {}, "export model");
const exportGrammarButton = el("button", {}, "export grammar");
toolbar.append(undoButton, enclosureButton, exportModelButton, exportGrammarButton);
sidebar.append(toolbar);

undoButton.addEventListener("click", () => void studio.undo().catch(() => {}));
enclosureButton.addEventListener("click", () => void studio.enclosure().catch(() => {}));
exportModelButton.addEventListener("click", () =>
  studio
    .exportModel()
    .then((model) => download(`${model.name || "model"}.json`, model))
    .catch(() => {}),
);
exportGrammarButton.addEventListener("click", () =>
  studio
    .exportGrammar()
    .then((grammar) => download("grammar.json", grammar))
    .catch(() => {}),
);

// -- choice panel --------------------------------------------------------------

const choiceBox = el("div", { class: "box grow" });
choiceBox.append(el("h3", {}, "rules for selection"));
const choiceList = el("div", { class: "choices" });
choiceBox.append(choiceList);
sidebar.append(choiceBox);

// -- canvas wiring -------------------------------------------------------------

const voxelCanvas = new VoxelCanvas(canvas);
voxelCanvas.onPick = (owner) => studio.select(owner);
frameButton.addEventListener("click", () => voxelCanvas.frameScene());

function showBanner(message: string | null): void {
  banner.textContent = message ?? "";
  banner.classList.toggle("hidden", !message);
}

function describeChoice(view: StudioView, c: ChoiceDoc): string {
  const target = view.snapshot?.placed_blocks[c.target];
  return `r${c.rule_index}: shape ${c.rule.rhs} at shape ${target?.shape ?? "?"} (${c.blocks.length} blocks)`;
}

function renderChoices(view: StudioView): void {
  choiceList.replaceChildren();
  if (view.selected === null) {
    choiceList.append(el("div", { class: "hint" }, "click a cube to select its shape"));
    return;
  }
  const options = studio.choicesForSelection();
  if (options.length === 0) {
    choiceList.append(el("div", { class: "hint" }, "no rules apply to this shape"));
    return;
  }
  for (const c of options) {
    const reason = c.conflict ? "conflicts with occupied cells" : c.duplicate ? "already placed" : "";
    const row = el(
      "button",
      { class: `choice${reason ? " disabled" : ""}`, title: reason },
      describeChoice(view, c),
    );
    if (reason) {
      row.setAttribute("disabled", "disabled");
    } else {
      row.addEventListener("click", () => void studio.applyChoice(c.index).catch(() => {}));
    }
    row.addEventListener("mouseenter", () => studio.hoverChoice(c));
    row.addEventListener("mouseleave", () => studio.hoverChoice(null));
    choiceList.append(row);
  }
}

let lastHash: string | null = null;
studio.subscribe((view) => {
  showBanner(view.banner);
  const scene = buildScene(view.snapshot, view.colorMode, view.selected, view.ghost);
  voxelCanvas.setScene(scene, view.snapshot !== null && view.snapshot.hash !== lastHash && lastHash === null);
  lastHash = view.snapshot?.hash ?? null;
  const blocks = view.snapshot
    ? view.snapshot.placed_blocks.reduce((n, p) => n + p.blocks.length, 0)
    : 0;
  statusLine.textContent = view.session
    ? `session ${view.session} | ${view.snapshot?.placed_blocks.length ?? 0} shapes | ` +
      `${blocks} block cells | ${view.notice ?? ""}${view.busy ? " …" : ""}`
    : "no session";
  renderChoices(view);
});
