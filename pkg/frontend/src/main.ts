// Bootstrap: pick a domain, open a session, request the first task, and
// wire the workspace to the controller. Everything on screen comes from
// the API payloads; no domain knowledge is hardcoded.

import { ApiClient } from "./api.js";
import { BlockChain } from "./blocks.js";
import { TutorController } from "./controller.js";
import {
  renderControls,
  renderPalette,
  renderPanels,
  renderTaskHeader,
  renderViewport,
  renderWorkspace,
} from "./render.js";

export interface AppOptions {
  baseUrl?: string;
  domain?: string;
  taskMode?: string;
  presetId?: string;
}

export async function startApp(root: HTMLElement, options: AppOptions = {}): Promise<TutorController> {
  const api = new ApiClient(options.baseUrl ?? "");
  root.innerHTML = `
    <header id="task-header"></header>
    <main class="layout">
      <nav id="palette"></nav>
      <section id="workspace"></section>
      <aside id="side">
        <div id="controls"></div>
        <div id="panels"></div>
        <div id="viewport-root"></div>
      </aside>
    </main>
  `;

  const domains = await api.listDomains();
  const domainName = options.domain ?? domains[0].name;
  const domain = domains.find((d) => d.name === domainName);
  if (!domain) throw new Error(`domain ${domainName} is not registered`);

  const session = await api.createSession(domain.name);
  const taskResponse = await api.nextTask(session.session_id, {
    mode: options.taskMode ?? "adaptive",
    preset_id: options.presetId,
  });

  const chain = new BlockChain(domain.schemas, taskResponse.objects);
  const controller = new TutorController(api, session.session_id, chain);

  const header = root.querySelector<HTMLElement>("#task-header")!;
  const palette = root.querySelector<HTMLElement>("#palette")!;
  const workspace = root.querySelector<HTMLElement>("#workspace")!;
  const panels = root.querySelector<HTMLElement>("#panels")!;
  const viewport = root.querySelector<HTMLElement>("#viewport-root")!;
  const controls = root.querySelector<HTMLElement>("#controls")!;

  renderTaskHeader(header, taskResponse.task, taskResponse.description);
  renderPalette(palette, controller);

  controller.onChange(() => {
    renderWorkspace(workspace, controller);
    renderPanels(panels, controller);
    renderViewport(viewport, controller);
    renderControls(controls, controller);
  });
  renderWorkspace(workspace, controller);
  renderPanels(panels, controller);
  renderViewport(viewport, controller);
  renderControls(controls, controller);

  return controller;
}

declare global {
  interface Window {
    plantutorStart?: typeof startApp;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  window.plantutorStart = startApp;
  void startApp(document.getElementById("app")!);
}
