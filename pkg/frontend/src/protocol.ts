/** Wire protocol of the operator bridge: one JSON object per WebSocket
 * message, server frames in, teleop/confirm frames out. */

export interface Pose {
  x: number;
  y: number;
  th: number;
}

export interface CircleObstacle {
  type: "circle";
  cx: number;
  cy: number;
  r: number;
}

export interface RectObstacle {
  type: "rect";
  x: number;
  y: number;
  w: number;
  h: number;
}

export type Obstacle = CircleObstacle | RectObstacle;

export interface RoomSpec {
  width: number;
  height: number;
  robot_footprint_radius: number;
  robot_kind: string;
  start_pose: { x: number; y: number; theta: number };
  static_obstacles: Obstacle[];
  dynamic_obstacles: unknown[];
  v_limit?: number;
  vy_limit?: number;
  w_limit?: number;
}

export interface ScanMeta {
  amin: number;
  ainc: number;
  rmax: number;
  n: number;
}

export interface HelloFrame {
  t: "hello";
  case: number;
  scenario: number;
  f_th: number;
  v_max: number;
  w_max: number;
  goal: [number, number];
  room: RoomSpec;
  scan_meta: ScanMeta;
}

export interface ViewMetrics {
  elapsed: number;
  goal_dist: number;
  reached: boolean;
  client_tp?: number;
  latency_avg?: number;
}

export interface ViewFrame {
  t: "view";
  ts: number;
  master_pose: Pose;
  master_twist: [number, number];
  scan: number[];
  fmax: number;
  metrics: ViewMetrics;
}

export interface EndFrame {
  t: "end";
  metrics: Record<string, unknown>;
}

export interface ErrorFrame {
  t: "error";
  reason: string;
}

export type ServerFrame = HelloFrame | ViewFrame | EndFrame | ErrorFrame;

export interface TeleopMsg {
  t: "teleop";
  v: number;
  w: number;
}

export interface ConfirmMsg {
  t: "confirm_goal";
}

export type OutboundMsg = TeleopMsg | ConfirmMsg;

const SERVER_KINDS = new Set(["hello", "view", "end", "error"]);

/** Parse one inbound message; returns null for anything malformed or of an
 * unknown kind, so a noisy wire cannot wedge the console. */
export function parseFrame(raw: string): ServerFrame | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const kind = (data as { t?: unknown }).t;
  if (typeof kind !== "string" || !SERVER_KINDS.has(kind)) return null;
  return data as ServerFrame;
}

export function encode(msg: OutboundMsg): string {
  return JSON.stringify(msg);
}
