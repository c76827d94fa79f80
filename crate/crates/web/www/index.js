import init, { MatchReplay, parseCommand, runTournament } from "./pkg/lmfa_web.js";

const $ = (id) => document.getElementById(id);
const BOTS = ["idle", "random", "rushdown", "zoner"];

let replay = null;
let timer = null;

function showError(el, err) {
  el.textContent = String(err.message ?? err);
  el.className = "error";
}

function drawFrame() {
  if (!replay) return;
  const i = Number($("scrub").value);
  const ctx = $("screen").getContext("2d");
  const pixels = new Uint8ClampedArray(replay.rgba(i, $("markers").checked));
  ctx.putImageData(new ImageData(pixels, MatchReplay.width(), MatchReplay.height()), 0, 0);
  $("frame-label").textContent = `frame ${i}`;
  $("state-text").textContent = replay.stateText(i);
}

function stop() {
  clearInterval(timer);
  timer = null;
  $("play").textContent = "Play";
}

function simulate() {
  stop();
  try {
    replay?.free();
    replay = new MatchReplay($("p1").value, $("p2").value, Number($("match-seed").value));
    const s = JSON.parse(replay.summary());
    const health = s.winner_health_fraction ?? "-";
    $("match-summary").textContent =
      `${s.winner ?? "draw"} (${s.end_reason}, health ${health}) after ${s.frames_elapsed} frames, ${s.decisions.length} decisions`;
    $("match-summary").className = "";
    $("scrub").max = replay.frameCount() - 1;
    $("scrub").value = 0;
    drawFrame();
  } catch (err) {
    showError($("match-summary"), err);
  }
}

function play() {
  if (timer) return stop();
  $("play").textContent = "Pause";
  timer = setInterval(() => {
    const scrub = $("scrub");
    if (Number(scrub.value) >= Number(scrub.max)) return stop();
    scrub.value = Number(scrub.value) + 1;
    drawFrame();
  }, 1000 / 60);
}

function parse() {
  try {
    const plan = JSON.parse(parseCommand($("command").value, $("facing").checked));
    const lines = plan.steps.map(
      (s, i) => `${i + 1}. ${s.tokens.join(" + ")} -> ${s.buttons} hold ${s.hold_frames} gap ${s.gap_frames}`,
    );
    $("plan").textContent = [`normalized: ${plan.normalized}`, ...lines, `total: ${plan.total_frames} frames`].join("\n");
    $("plan").className = "";
  } catch (err) {
    showError($("plan"), err);
  }
}

function table(header, rows) {
  const head = `<tr>${header.map((h) => `<th>${h}</th>`).join("")}</tr>`;
  const body = rows.map((r) => `<tr>${r.map((c) => `<td>${c}</td>`).join("")}</tr>`).join("");
  return `<table>${head}${body}</table>`;
}

function heatCell(v) {
  const shade = Math.round(255 - v * 180);
  return `<span style="display:block;background:rgb(255,${shade},${shade})">${v.toFixed(2)}</span>`;
}

function tournament() {
  const out = $("tour-out");
  try {
    const t = JSON.parse(runTournament(Number($("tour-seed").value), Number($("tour-mpp").value)));
    const matrix = table(["", ...t.agents], t.agents.map((a, i) => [a, ...t.matrix[i]]));
    const rates = table(
      ["agent", "win rate", "W", "D", "L"],
      t.win_rates.map((r) => [r.agent, r.win_rate.toFixed(3), r.wins, r.draws, r.losses]),
    );
    const heat = table(
      ["", ...t.heatmap.buttons],
      t.heatmap.agents.map((a, i) => [a, ...t.heatmap.normalized[i].map(heatCell)]),
    );
    out.innerHTML = `<h3>Results</h3>${matrix}<h3>Win rates</h3>${rates}<h3>Button usage</h3>${heat}`;
  } catch (err) {
    showError(out, err);
  }
}

await init();
for (const id of ["p1", "p2"]) {
  $(id).innerHTML = BOTS.map((b) => `<option>${b}</option>`).join("");
}
$("p1").value = "rushdown";
$("p2").value = "zoner";
$("simulate").onclick = simulate;
$("play").onclick = play;
$("scrub").oninput = drawFrame;
$("markers").onchange = drawFrame;
$("command").oninput = parse;
$("facing").onchange = parse;
$("tournament").onclick = tournament;
$("status").textContent = "Ready.";
parse();
simulate();
