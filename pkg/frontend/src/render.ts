/** Canvas rendering of the master room: walls, obstacles, robot, scan
 * points, goal marker. The console only ever receives the master room, so
 * that is all it can draw. */

import { HelloFrame, Obstacle, ViewFrame } from "./protocol.js";

export interface Viewport {
  scale: number; // pixels per meter
  offX: number;
  offY: number;
  height: number; // canvas pixel height, for the y flip
}

/** Fit a room into a canvas with a margin; world y points up, canvas y down. */
export function fitViewport(
  roomW: number, roomH: number, canvasW: number, canvasH: number, marginPx = 16,
): Viewport {
  const scale = Math.min(
    (canvasW - 2 * marginPx) / roomW,
    (canvasH - 2 * marginPx) / roomH,
  );
  const offX = (canvasW - roomW * scale) / 2;
  const offY = (canvasH - roomH * scale) / 2;
  return { scale, offX, offY, height: canvasH };
}

export function worldToScreen(vp: Viewport, x: number, y: number): [number, number] {
  return [vp.offX + x * vp.scale, vp.height - (vp.offY + y * vp.scale)];
}

/** Scan ranges to world points around the robot pose. Rays at the maximum
 * range saw nothing and are skipped. */
export function scanPoints(
  pose: { x: number; y: number; th: number },
  ranges: number[], amin: number, ainc: number, rmax: number,
): Array<[number, number]> {
  const pts: Array<[number, number]> = [];
  for (let i = 0; i < ranges.length; i++) {
    const r = ranges[i];
    if (r >= rmax) continue;
    const a = pose.th + amin + i * ainc;
    pts.push([pose.x + r * Math.cos(a), pose.y + r * Math.sin(a)]);
  }
  return pts;
}

function drawObstacle(ctx: CanvasRenderingContext2D, vp: Viewport, ob: Obstacle): void {
  ctx.beginPath();
  if (ob.type === "circle") {
    const [cx, cy] = worldToScreen(vp, ob.cx, ob.cy);
    ctx.arc(cx, cy, ob.r * vp.scale, 0, 2 * Math.PI);
  } else {
    const [px, py] = worldToScreen(vp, ob.x, ob.y + ob.h);
    ctx.rect(px, py, ob.w * vp.scale, ob.h * vp.scale);
  }
  ctx.fill();
}

export function drawScene(
  ctx: CanvasRenderingContext2D, canvasW: number, canvasH: number,
  hello: HelloFrame, view: ViewFrame | null,
): void {
  const room = hello.room;
  const vp = fitViewport(room.width, room.height, canvasW, canvasH);
  ctx.clearRect(0, 0, canvasW, canvasH);

  // floor and walls
  const [x0, y0] = worldToScreen(vp, 0, room.height);
  ctx.fillStyle = "#10141a";
  ctx.fillRect(x0, y0, room.width * vp.scale, room.height * vp.scale);
  ctx.strokeStyle = "#5b6573";
  ctx.lineWidth = 2;
  ctx.strokeRect(x0, y0, room.width * vp.scale, room.height * vp.scale);

  ctx.fillStyle = "#3a4454";
  for (const ob of room.static_obstacles) drawObstacle(ctx, vp, ob);

  // goal
  const [gx, gy] = worldToScreen(vp, hello.goal[0], hello.goal[1]);
  ctx.strokeStyle = "#4cc38a";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(gx, gy, 0.3 * vp.scale, 0, 2 * Math.PI);
  ctx.stroke();
  ctx.beginPath();
  ctx.moveTo(gx - 5, gy);
  ctx.lineTo(gx + 5, gy);
  ctx.moveTo(gx, gy - 5);
  ctx.lineTo(gx, gy + 5);
  ctx.stroke();

  if (view === null) return;
  const pose = view.master_pose;

  // scan returns
  const meta = hello.scan_meta;
  ctx.fillStyle = "#d8774a";
  for (const [sx, sy] of scanPoints(pose, view.scan, meta.amin, meta.ainc, meta.rmax)) {
    const [px, py] = worldToScreen(vp, sx, sy);
    ctx.fillRect(px - 1, py - 1, 2, 2);
  }

  // robot: hull circle plus heading tick
  const [rx, ry] = worldToScreen(vp, pose.x, pose.y);
  const rr = room.robot_footprint_radius * vp.scale;
  ctx.fillStyle = "#7aa2f7";
  ctx.beginPath();
  ctx.arc(rx, ry, rr, 0, 2 * Math.PI);
  ctx.fill();
  const [hx, hy] = worldToScreen(
    vp,
    pose.x + room.robot_footprint_radius * 1.6 * Math.cos(pose.th),
    pose.y + room.robot_footprint_radius * 1.6 * Math.sin(pose.th),
  );
  ctx.strokeStyle = "#c3d4fb";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(rx, ry);
  ctx.lineTo(hx, hy);
  ctx.stroke();
}

/** Force gauge: bar fill is the fraction of the highlight threshold, capped
 * at full; the element gets the `hot` class at and above the threshold. */
export function renderGauge(
  bar: HTMLElement, value: number, threshold: number,
): void {
  const frac = threshold > 0 ? Math.min(value / threshold, 1) : 0;
  bar.style.width = `${(frac * 100).toFixed(1)}%`;
  bar.classList.toggle("hot", threshold > 0 && value >= threshold);
}
