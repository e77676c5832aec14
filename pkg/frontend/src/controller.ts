// Orchestration between the block chain and the backend: one validation
// round-trip per edit with latest-edit-wins cancellation, panel state for
// explanations / state display / hint popup, and the execute gate, which
// is open exactly when the last report says the plan is valid.

import type {
  ApiClient,
  Explanation,
  HintResponse,
  Report,
  TraceFrame,
  ValidateResponse,
} from "./api.js";
import { ApiError } from "./api.js";
import { BlockChain } from "./blocks.js";

export interface PanelState {
  report: Report | null;
  explanations: Explanation[];
  trace: TraceFrame[];
  structuralError: string | null; // unresolvable step, shown instead of failures
  highlightedStep: number | null; // 0-based block index, from explanation select
  stateDisplayOpen: boolean; // collapsed by default
  hint: HintResponse | null; // popup content when present
  hintPending: boolean;
  executing: boolean;
  executedFrames: TraceFrame[];
  currentFrame: number;
  goalBanner: boolean;
}

function emptyPanels(): PanelState {
  return {
    report: null,
    explanations: [],
    trace: [],
    structuralError: null,
    highlightedStep: null,
    stateDisplayOpen: false,
    hint: null,
    hintPending: false,
    executing: false,
    executedFrames: [],
    currentFrame: -1,
    goalBanner: false,
  };
}

export class TutorController {
  panels: PanelState = emptyPanels();
  validationCount = 0; // round-trips actually issued
  private inflight: AbortController | null = null;
  private latest = 0;
  private listeners: (() => void)[] = [];

  constructor(
    readonly api: ApiClient,
    readonly sessionId: string,
    readonly chain: BlockChain,
  ) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  get executeEnabled(): boolean {
    return this.panels.report !== null && this.panels.report.is_valid;
  }

  // One round-trip per edit; a newer edit aborts and supersedes this one.
  async onPlanChange(): Promise<void> {
    const ticket = ++this.latest;
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;

    // prior panels are stale the moment the plan changes
    this.panels.report = null;
    this.panels.explanations = [];
    this.panels.trace = [];
    this.panels.structuralError = null;
    this.panels.highlightedStep = null;
    this.panels.goalBanner = false;
    this.notify();

    this.validationCount += 1;
    let response: ValidateResponse;
    try {
      response = await this.api.validatePlan(this.sessionId, this.chain.toPlan(), controller.signal);
    } catch (error) {
      if (ticket !== this.latest) return; // superseded, ignore
      if (error instanceof ApiError && error.body.code === "unresolvable_step") {
        this.panels.structuralError = error.body.message;
        this.notify();
        return;
      }
      if ((error as Error).name === "AbortError") return;
      throw error;
    }
    if (ticket !== this.latest) return; // stale response loses
    this.panels.report = response.report;
    this.panels.explanations = response.explanations;
    this.panels.trace = response.trace;
    this.notify();
  }

  onExplanationSelect(failureIndex: number): void {
    const report = this.panels.report;
    if (!report || failureIndex >= report.failures.length) return; // stale index
    this.panels.highlightedStep = report.failures[failureIndex].step_index;
    this.notify();
  }

  onExplanationClose(): void {
    this.panels.highlightedStep = null;
    this.notify();
  }

  toggleStateDisplay(): void {
    this.panels.stateDisplayOpen = !this.panels.stateDisplayOpen;
    this.notify();
  }

  async onHintClick(): Promise<void> {
    if (this.panels.hintPending) return;
    this.panels.hintPending = true;
    this.notify();
    try {
      this.panels.hint = await this.api.requestHint(this.sessionId);
    } catch (error) {
      if (error instanceof ApiError) {
        this.panels.hint = { status: "hint-timeout", message: error.body.message } as HintResponse;
      } else {
        throw error;
      }
    } finally {
      this.panels.hintPending = false;
      this.notify();
    }
  }

  dismissHint(): void {
    this.panels.hint = null;
    this.notify();
  }

  // Plays the returned frames; frameDelayMs of 0 steps synchronously.
  async onExecute(frameDelayMs = 600): Promise<void> {
    if (!this.executeEnabled || this.panels.executing) return;
    this.panels.executing = true;
    this.notify();
    try {
      const response = await this.api.executePlan(this.sessionId, this.chain.toPlan());
      this.panels.executedFrames = response.frames;
      for (let i = 0; i < response.frames.length; i++) {
        this.panels.currentFrame = i;
        this.notify();
        if (frameDelayMs > 0) {
          await new Promise((resolve) => setTimeout(resolve, frameDelayMs));
        }
      }
      this.panels.goalBanner = response.goal_achieved;
    } finally {
      this.panels.executing = false;
      this.notify();
    }
  }
}
