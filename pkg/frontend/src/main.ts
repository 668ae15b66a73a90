/**
 * Browser entry point: wires the socket, canvas loop, and debrief forms.
 * Connect with ?participant=<id>&server=<host:port>.
 */
import { GameClient } from "./client.js";
import { dispatchClick } from "./input.js";
import { interpolate } from "./interpolate.js";
import { renderFrame, type Layout } from "./render.js";
import {
  buildChoiceSubmit,
  buildSurveySubmit,
  newSurveyForm,
  setAnswer,
  surveyComplete,
  type SurveyForm,
} from "./survey.js";

const IDENTITY_COLORS: Record<string, string> = {
  green: "#2a2",
  purple: "#92d",
  copper: "#b73",
  blue: "#36c",
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  const params = new URLSearchParams(window.location.search);
  const participant = params.get("participant") ?? "demo";
  const server = params.get("server") ?? window.location.host;
  const socket = new WebSocket(`ws://${server}/ws/${participant}`);
  const client = new GameClient(socket);

  const canvas = el<HTMLCanvasElement>("arena");
  const ctx = canvas.getContext("2d")!;
  const layout: Layout = { width: canvas.width, height: canvas.height, arenaRadius: 400 };
  const status = el<HTMLDivElement>("status");
  const surveyDiv = el<HTMLDivElement>("survey");
  const choiceDiv = el<HTMLDivElement>("choice");

  let surveyForm: SurveyForm | null = null;

  canvas.addEventListener("click", (ev) => {
    if (client.vm.phase !== "playing") return;
    const rect = canvas.getBoundingClientRect();
    const scene = interpolate(client.vm, performance.now());
    if (!scene) return;
    // invert the screen transform used by the renderer
    const scale = Math.min(layout.width, layout.height) / (2 * layout.arenaRadius + 40);
    const x = (ev.clientX - rect.left - layout.width / 2) / scale;
    const y = -(ev.clientY - rect.top - layout.height / 2) / scale;
    const msg = dispatchClick(scene, x, y);
    if (msg) client.send(msg);
  });

  function renderSurvey(): void {
    if (client.vm.phase !== "survey" || !client.vm.identities) {
      surveyDiv.style.display = "none";
      return;
    }
    if (!surveyForm) {
      surveyForm = newSurveyForm(client.vm.identities, client.vm.surveyItems);
      surveyDiv.innerHTML = "";
      const matrices = document.createElement("div");
      matrices.style.display = "flex";
      for (const identity of surveyForm.identities) {
        const table = document.createElement("table");
        const caption = table.createCaption();
        caption.textContent = `${identity}-bot`;
        surveyForm.items.forEach((item, idx) => {
          const row = table.insertRow();
          row.insertCell().textContent = item;
          for (let v = 1; v <= 7; v++) {
            const cell = row.insertCell();
            const radio = document.createElement("input");
            radio.type = "radio";
            radio.name = `${identity}-q${idx + 1}`;
            radio.addEventListener("change", () => {
              setAnswer(surveyForm!, identity, idx + 1, v);
              submit.disabled = !surveyComplete(surveyForm!);
            });
            cell.appendChild(radio);
          }
        });
        matrices.appendChild(table);
      }
      surveyDiv.appendChild(matrices);
      const submit = document.createElement("button");
      submit.textContent = "Submit";
      submit.disabled = true;
      submit.addEventListener("click", () => {
        const msg = buildSurveySubmit(surveyForm!);
        if (msg) {
          client.send(msg);
          surveyForm = null;
        }
      });
      surveyDiv.appendChild(submit);
    }
    surveyDiv.style.display = "block";
  }

  function renderChoice(): void {
    if (client.vm.phase !== "choice" || !client.vm.identities) {
      choiceDiv.style.display = "none";
      return;
    }
    if (!choiceDiv.hasChildNodes()) {
      let chosen: string | null = null;
      const prompt = document.createElement("p");
      prompt.textContent = "Which teammate would you rather play with again, and why?";
      choiceDiv.appendChild(prompt);
      const text = document.createElement("textarea");
      const submit = document.createElement("button");
      submit.textContent = "Submit";
      submit.disabled = true;
      const refresh = () => {
        submit.disabled =
          buildChoiceSubmit(client.vm.identities!, chosen, text.value) === null;
      };
      for (const identity of client.vm.identities) {
        const label = document.createElement("label");
        const radio = document.createElement("input");
        radio.type = "radio";
        radio.name = "choice";
        radio.addEventListener("change", () => {
          chosen = identity;
          refresh();
        });
        label.appendChild(radio);
        label.appendChild(document.createTextNode(`${identity}-bot`));
        choiceDiv.appendChild(label);
      }
      text.addEventListener("input", refresh);
      choiceDiv.appendChild(text);
      submit.addEventListener("click", () => {
        const msg = buildChoiceSubmit(client.vm.identities!, chosen, text.value);
        if (msg) {
          client.send(msg);
          choiceDiv.innerHTML = "";
        }
      });
      choiceDiv.appendChild(submit);
    }
    choiceDiv.style.display = "block";
  }

  function loop(): void {
    const vm = client.vm;
    if (vm.phase === "playing") {
      const scene = interpolate(vm, performance.now());
      if (scene && vm.hello) {
        const name = `${vm.hello.display_identity}-bot`;
        const color = IDENTITY_COLORS[vm.hello.display_identity] ?? "#888";
        renderFrame(ctx, scene, layout, { name, color });
      }
      status.textContent = "";
    } else if (vm.phase === "waiting") {
      status.textContent = vm.finalScores
        ? `Round over — team score ${vm.finalScores.team}`
        : "Waiting for the next round…";
    } else if (vm.phase === "done") {
      status.textContent = "Session complete. Thank you!";
    }
    if (vm.lastError) {
      status.textContent = vm.lastError;
    }
    renderSurvey();
    renderChoice();
    requestAnimationFrame(loop);
  }
  requestAnimationFrame(loop);
}

main();
