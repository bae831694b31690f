/** Thin typed client for the voxelskin service. */
import type {
  Address,
  EvaluateResponse,
  GridResponse,
  PatternResponse,
  PresetPattern,
  ScheduleResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: unknown,
  ) {
    super(`api error ${status}`);
  }
}

export class StudioApi {
  constructor(private base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.base + path, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    const body = await resp.json();
    if (!resp.ok) throw new ApiError(resp.status, body);
    return body as T;
  }

  grid(): Promise<GridResponse> {
    return this.request<GridResponse>("/grid");
  }

  putPattern(version: number, addresses: Address[], label = ""): Promise<PatternResponse> {
    return this.request<PatternResponse>("/pattern", {
      method: "PUT",
      body: JSON.stringify({ version, addresses, label }),
    });
  }

  evaluate(): Promise<EvaluateResponse> {
    return this.request<EvaluateResponse>("/evaluate", {
      method: "POST",
      body: JSON.stringify({}),
    });
  }

  presets(): Promise<{ version: number; presets: PresetPattern[] }> {
    return this.request("/presets/joints");
  }

  planSchedule(budgetW: number, addresses?: Address[]): Promise<ScheduleResponse> {
    return this.request<ScheduleResponse>("/schedule/plan", {
      method: "POST",
      body: JSON.stringify({ budget_w: budgetW, addresses }),
    });
  }

  trim(version: number, addresses: Address[]): Promise<{ version: number; active_voxels: number }> {
    return this.request("/trim", {
      method: "POST",
      body: JSON.stringify({ version, addresses }),
    });
  }
}
