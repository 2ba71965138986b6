/** Console session model. Pure state machine: inbound frames and key events
 * mutate it, a fixed-cadence pump drains outbound messages. No DOM, no
 * sockets, no real clock, so the whole contract is unit-testable. */

import { DRIVE_CODES, keysToTwist, Limits, Twist } from "./keys.js";
import { HelloFrame, OutboundMsg, parseFrame, ServerFrame, ViewFrame } from "./protocol.js";

export type Phase = "connecting" | "live" | "ended" | "error";

export const SEND_PERIOD_MS = 100;
/** Pump faster than the send period so key transitions go out promptly. */
export const PUMP_PERIOD_MS = SEND_PERIOD_MS / 2;
export const STALE_AFTER_MS = 1000;

export class ConsoleSession {
  phase: Phase = "connecting";
  hello: HelloFrame | null = null;
  lastView: ViewFrame | null = null;
  banner: string | null = null;
  finalMetrics: Record<string, unknown> | null = null;
  /** Every inbound frame kind ever seen; the view never learns more than
   * the master room, and this makes that auditable. */
  readonly seenKinds = new Set<string>();

  private held = new Set<string>();
  private lastViewAt = -Infinity;
  private lastSentAt = -Infinity;
  private sendNow = false; // key transition forces an immediate send
  private confirmPending = false;

  // ---- inbound ------------------------------------------------------------

  handleMessage(raw: string, nowMs: number): void {
    const frame = parseFrame(raw);
    if (frame === null) return;
    this.handleFrame(frame, nowMs);
  }

  handleFrame(frame: ServerFrame, nowMs: number): void {
    this.seenKinds.add(frame.t);
    switch (frame.t) {
      case "hello":
        this.hello = frame;
        this.phase = "live";
        this.banner = null;
        break;
      case "view":
        this.lastView = frame;
        this.lastViewAt = nowMs;
        break;
      case "end":
        this.finalMetrics = frame.metrics;
        this.phase = "ended";
        this.held.clear();
        break;
      case "error":
        this.banner = frame.reason;
        this.phase = "error";
        this.held.clear();
        break;
    }
  }

  /** Socket dropped or never opened. */
  handleDisconnect(reason: string): void {
    if (this.phase !== "ended") {
      this.phase = "error";
      this.banner = reason;
    }
    this.held.clear();
  }

  // ---- operator input -------------------------------------------------------

  keyEvent(type: "keydown" | "keyup", code: string): boolean {
    if (!DRIVE_CODES.has(code)) return false;
    const before = this.commandedTwist();
    if (type === "keydown") this.held.add(code);
    else this.held.delete(code);
    const after = this.commandedTwist();
    if (before.v !== after.v || before.w !== after.w) this.sendNow = true;
    return true;
  }

  requestConfirm(): void {
    this.confirmPending = true;
  }

  // ---- model queries ----------------------------------------------------------

  limits(): Limits {
    return this.hello === null
      ? { vMax: 0, wMax: 0 }
      : { vMax: this.hello.v_max, wMax: this.hello.w_max };
  }

  /** Zero whenever no drive key is held or the trial is not live. */
  commandedTwist(): Twist {
    if (this.phase !== "live") return { v: 0, w: 0 };
    return keysToTwist(this.held, this.limits());
  }

  gaugeValue(): number {
    return this.lastView === null ? 0 : this.lastView.fmax;
  }

  gaugeHighlighted(): boolean {
    return this.hello !== null && this.gaugeValue() >= this.hello.f_th;
  }

  isStale(nowMs: number): boolean {
    return this.phase === "live" && nowMs - this.lastViewAt > STALE_AFTER_MS;
  }

  // ---- outbound ------------------------------------------------------------------

  /** Drain outbound messages. Call on a timer at least as fast as the send
   * period; teleop streams continuously at that cadence while live, and any
   * key transition (notably release to zero) goes out on the next pump. */
  pump(nowMs: number): OutboundMsg[] {
    const out: OutboundMsg[] = [];
    if (this.phase !== "live") return out;
    if (this.confirmPending) {
      this.confirmPending = false;
      out.push({ t: "confirm_goal" });
    }
    if (this.sendNow || nowMs - this.lastSentAt >= SEND_PERIOD_MS) {
      const tw = this.commandedTwist();
      out.push({ t: "teleop", v: tw.v, w: tw.w });
      this.lastSentAt = nowMs;
      this.sendNow = false;
    }
    return out;
  }
}
