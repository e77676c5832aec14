// DOM rendering for the single-page workspace. Everything re-renders from
// the controller's state; element ids and data-testid attributes double
// as the automation hooks used by the UI tests.

import type { ObjectInfo, TaskInfo } from "./api.js";
import type { TutorController } from "./controller.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function clickSound(): void {
  // snap feedback; AudioContext is unavailable under test runners
  try {
    const Ctx = (window as any).AudioContext ?? (window as any).webkitAudioContext;
    if (!Ctx) return;
    const ctx = new Ctx();
    const osc = ctx.createOscillator();
    const gain = ctx.createGain();
    osc.frequency.value = 880;
    gain.gain.value = 0.05;
    osc.connect(gain).connect(ctx.destination);
    osc.start();
    osc.stop(ctx.currentTime + 0.05);
  } catch {
    /* no audio available */
  }
}

export function renderTaskHeader(root: HTMLElement, task: TaskInfo, description: string): void {
  root.innerHTML = "";
  const card = el("div", "task-card");
  card.appendChild(el("h2", undefined, "Your task"));
  const goal = el("p", "task-goal", task.goal_nl);
  goal.dataset.testid = "task-goal";
  card.appendChild(goal);
  const details = el("details", "task-description");
  details.appendChild(el("summary", undefined, "About this environment"));
  details.appendChild(el("pre", undefined, description));
  card.appendChild(details);
  root.appendChild(card);
}

export function renderPalette(root: HTMLElement, controller: TutorController): void {
  root.innerHTML = "";
  root.appendChild(el("h3", undefined, "Instructions"));
  for (const schema of controller.chain.schemas) {
    const button = el("button", "palette-block", schema.name);
    button.dataset.testid = `palette-${schema.name}`;
    button.title = schema.label;
    button.addEventListener("click", () => {
      controller.chain.add(schema.name);
      clickSound();
      void controller.onPlanChange();
    });
    root.appendChild(button);
  }
}

function argSelect(
  controller: TutorController,
  blockId: number,
  paramIndex: number,
  value: string,
  options: ObjectInfo[],
): HTMLSelectElement {
  const select = el("select", "block-arg");
  select.dataset.testid = `arg-${blockId}-${paramIndex}`;
  for (const option of options) {
    const item = el("option", undefined, option.display);
    item.value = option.name;
    select.appendChild(item);
  }
  select.value = value;
  select.addEventListener("change", () => {
    controller.chain.setArg(blockId, paramIndex, select.value);
    void controller.onPlanChange();
  });
  return select;
}

export function renderWorkspace(root: HTMLElement, controller: TutorController): void {
  root.innerHTML = "";
  const start = el("div", "block start-block", "Connect blocks here");
  start.dataset.testid = "start-block";
  root.appendChild(start);

  const report = controller.panels.report;
  controller.chain.blocks.forEach((block, index) => {
    const node = el("div", "block");
    node.dataset.testid = `block-${index}`;
    node.draggable = true;
    if (report && report.step_status[index] === "invalid") node.classList.add("invalid");
    if (controller.panels.highlightedStep === index) node.classList.add("highlighted");
    if (block.minimized) node.classList.add("minimized");

    const header = el("div", "block-header");
    header.appendChild(el("span", "block-name", block.schema));
    const controls = el("span", "block-controls");
    const minimize = el("button", "block-button", block.minimized ? "+" : "–");
    minimize.title = block.minimized ? "maximize" : "minimize";
    minimize.dataset.testid = `minimize-${index}`;
    minimize.addEventListener("click", () => {
      controller.chain.toggleMinimized(block.id);
      renderWorkspace(root, controller);
    });
    const up = el("button", "block-button", "↑");
    up.addEventListener("click", () => {
      controller.chain.move(block.id, index - 1);
      void controller.onPlanChange();
    });
    const down = el("button", "block-button", "↓");
    down.addEventListener("click", () => {
      controller.chain.move(block.id, index + 1);
      void controller.onPlanChange();
    });
    const remove = el("button", "block-button", "×");
    remove.dataset.testid = `remove-${index}`;
    remove.addEventListener("click", () => {
      controller.chain.remove(block.id);
      void controller.onPlanChange();
    });
    for (const b of [minimize, up, down, remove]) controls.appendChild(b);
    header.appendChild(controls);
    node.appendChild(header);

    if (!block.minimized) {
      const args = el("div", "block-args");
      const params = controller.chain.schema(block.schema).params;
      params.forEach((param, paramIndex) => {
        const label = el("label", "arg-label", param.name.replace("?", ""));
        label.appendChild(
          argSelect(
            controller,
            block.id,
            paramIndex,
            block.args[paramIndex],
            controller.chain.optionsFor(block.schema, paramIndex),
          ),
        );
        args.appendChild(label);
      });
      node.appendChild(args);
    }

    node.addEventListener("dragstart", (event) => {
      event.dataTransfer?.setData("text/plain", String(index));
    });
    node.addEventListener("dragover", (event) => event.preventDefault());
    node.addEventListener("drop", (event) => {
      event.preventDefault();
      const from = Number(event.dataTransfer?.getData("text/plain"));
      if (!Number.isNaN(from) && controller.chain.blocks[from]) {
        controller.chain.move(controller.chain.blocks[from].id, index);
        void controller.onPlanChange();
      }
    });

    root.appendChild(node);
  });
}

export function renderPanels(root: HTMLElement, controller: TutorController): void {
  root.innerHTML = "";
  const panels = controller.panels;

  if (panels.structuralError) {
    const error = el("div", "structural-error", panels.structuralError);
    error.dataset.testid = "structural-error";
    root.appendChild(error);
  }

  const explanations = el("div", "explanations");
  explanations.dataset.testid = "explanations";
  panels.explanations.forEach((explanation, index) => {
    const entry = el("details", "explanation");
    entry.dataset.testid = `explanation-${index}`;
    const summary = el("summary", undefined, `TLDR: ${explanation.tldr}`);
    entry.appendChild(summary);
    if (explanation.detailed) {
      entry.appendChild(el("p", "explanation-detailed", `Explanation: ${explanation.detailed}`));
    } else {
      entry.appendChild(el("p", "explanation-detailed muted", "(no detailed translation available)"));
    }
    entry.addEventListener("toggle", () => {
      if (entry.open) controller.onExplanationSelect(index);
      else controller.onExplanationClose();
    });
    explanations.appendChild(entry);
  });
  root.appendChild(explanations);

  const stateDisplay = el("details", "state-display");
  stateDisplay.dataset.testid = "state-display";
  stateDisplay.open = panels.stateDisplayOpen;
  stateDisplay.appendChild(el("summary", undefined, "State display"));
  for (const frame of panels.trace) {
    const entry = el("div", "trace-entry");
    entry.appendChild(el("div", "trace-label", frame.label === "init" ? "Initial state" : frame.nl));
    const changes = frame.added.map((a) => `+${a}`).concat(frame.removed.map((r) => `-${r}`));
    if (changes.length) entry.appendChild(el("div", "trace-delta", changes.join("  ")));
    entry.appendChild(el("div", "trace-state", frame.state.join(" ")));
    stateDisplay.appendChild(entry);
  }
  stateDisplay.addEventListener("toggle", () => {
    panels.stateDisplayOpen = stateDisplay.open;
  });
  root.appendChild(stateDisplay);

  if (panels.hint) {
    const popup = el("div", "hint-popup");
    popup.dataset.testid = "hint-popup";
    popup.dataset.status = panels.hint.status;
    popup.appendChild(el("p", undefined, panels.hint.message));
    if (panels.hint.detailed) popup.appendChild(el("p", "muted", panels.hint.detailed));
    const dismiss = el("button", undefined, "Close");
    dismiss.dataset.testid = "hint-dismiss";
    dismiss.addEventListener("click", () => controller.dismissHint());
    popup.appendChild(dismiss);
    root.appendChild(popup);
  }
}

export function renderViewport(root: HTMLElement, controller: TutorController): void {
  root.innerHTML = "";
  const panels = controller.panels;
  const frame =
    panels.currentFrame >= 0 ? panels.executedFrames[panels.currentFrame] : null;
  const screen = el("div", "viewport");
  screen.dataset.testid = "viewport";
  if (frame) {
    screen.appendChild(el("div", "viewport-step", frame.label === "init" ? "Initial state" : frame.nl));
    const objects = el("div", "viewport-state");
    for (const atom of frame.state) objects.appendChild(el("span", "viewport-atom", atom));
    screen.appendChild(objects);
  } else {
    screen.appendChild(el("div", "muted", "Execute a valid plan to watch it here."));
  }
  if (panels.goalBanner) {
    const banner = el("div", "goal-banner", "Goal achieved!");
    banner.dataset.testid = "goal-banner";
    screen.appendChild(banner);
  }
  root.appendChild(screen);
}

export function renderControls(root: HTMLElement, controller: TutorController): void {
  root.innerHTML = "";
  const hint = el("button", "control hint-button", "Get a Hint");
  hint.dataset.testid = "hint-button";
  hint.disabled = controller.panels.hintPending;
  hint.addEventListener("click", () => void controller.onHintClick());
  root.appendChild(hint);

  const execute = el("button", "control execute-button", "Execute on Robot");
  execute.dataset.testid = "execute-button";
  execute.disabled = !controller.executeEnabled || controller.panels.executing;
  execute.addEventListener("click", () => void controller.onExecute());
  root.appendChild(execute);
}
