// Typed client for the tutor backend. Every call is request-shaped JSON;
// validatePlan accepts an AbortSignal so the controller can cancel a
// stale request when the learner edits again.

export interface StepPayload {
  name: string;
  args: string[];
}

export interface FailureInfo {
  step_index: number;
  action: { name: string; args: string[] };
  unmet: string[];
}

export interface Report {
  step_status: ("valid" | "invalid")[];
  failures: FailureInfo[];
  trace: string[][];
  is_valid: boolean;
  goal_achieved: boolean;
  final_state: string[];
}

export interface Explanation {
  step_index: number; // 1-based
  action_nl: string;
  reasons_nl: string[];
  tldr: string;
  detailed: string | null;
  source: "template" | "llm";
}

export interface TraceFrame {
  label: string;
  nl: string;
  state: string[];
  added: string[];
  removed: string[];
}

export interface ValidateResponse {
  report: Report;
  explanations: Explanation[];
  trace: TraceFrame[];
}

export interface SchemaParam {
  name: string;
  type: string;
}

export interface SchemaInfo {
  name: string;
  params: SchemaParam[];
  label: string;
}

export interface PresetInfo {
  id: string;
  goal_nl: string;
  reference_plan_length: number;
}

export interface DomainInfo {
  name: string;
  description: string;
  default_preset: string;
  presets: PresetInfo[];
  schemas: SchemaInfo[];
}

export interface TaskInfo {
  task_id: string;
  provenance: string;
  preset: string;
  goal: string[];
  goal_nl: string;
  reference_plan_length: number;
}

export interface ObjectInfo {
  name: string;
  type: string;
  display: string;
}

export interface TaskResponse {
  task: TaskInfo;
  objects: ObjectInfo[];
  description: string;
}

export interface HintResponse {
  status: "ok" | "hint-timeout" | "unsolvable" | "already-solved";
  message: string;
  hint?: { action: { name: string; args: string[] }; visible: boolean[]; text: string };
  detailed?: string;
}

export interface ExecuteResponse {
  frames: TraceFrame[];
  goal_achieved: boolean;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details?: Record<string, unknown>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(body.message);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  const body = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, body as ApiErrorBody);
  }
  return body as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private async post<T>(path: string, body: unknown, signal?: AbortSignal): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
      signal,
    });
    return asJson<T>(response);
  }

  async listDomains(): Promise<DomainInfo[]> {
    return asJson(await fetch(this.baseUrl + "/api/domains"));
  }

  createSession(domain: string): Promise<{ session_id: string; domain: string }> {
    return this.post("/api/sessions", { domain });
  }

  nextTask(
    sessionId: string,
    body: { mode: string; preset_id?: string; depth?: number; seed?: number },
  ): Promise<TaskResponse> {
    return this.post(`/api/sessions/${sessionId}/task`, body);
  }

  validatePlan(sessionId: string, plan: StepPayload[], signal?: AbortSignal): Promise<ValidateResponse> {
    return this.post(`/api/sessions/${sessionId}/validate`, { plan }, signal);
  }

  requestHint(sessionId: string): Promise<HintResponse> {
    return this.post(`/api/sessions/${sessionId}/hint`, undefined);
  }

  executePlan(sessionId: string, plan: StepPayload[]): Promise<ExecuteResponse> {
    return this.post(`/api/sessions/${sessionId}/execute`, { plan });
  }
}
