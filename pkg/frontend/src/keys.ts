/** Keyboard-to-twist mapping: the drive keys command a fixed fraction of the
 * served velocity limits, opposing keys cancel, and axes compose. */

export const KEY_FRACTION = 0.8;

const FORWARD = new Set(["KeyW", "ArrowUp"]);
const BACK = new Set(["KeyS", "ArrowDown"]);
const LEFT = new Set(["KeyA", "ArrowLeft"]);
const RIGHT = new Set(["KeyD", "ArrowRight"]);

export const DRIVE_CODES: ReadonlySet<string> = new Set([
  ...FORWARD, ...BACK, ...LEFT, ...RIGHT,
]);

export interface Limits {
  vMax: number;
  wMax: number;
}

export interface Twist {
  v: number;
  w: number;
}

function axis(held: ReadonlySet<string>, pos: Set<string>, neg: Set<string>): number {
  let a = 0;
  for (const code of held) {
    if (pos.has(code)) {
      a += 1;
      break;
    }
  }
  for (const code of held) {
    if (neg.has(code)) {
      a -= 1;
      break;
    }
  }
  return a;
}

/** Held drive keys to a commanded twist. Left turn is positive w. */
export function keysToTwist(held: ReadonlySet<string>, limits: Limits): Twist {
  return {
    v: KEY_FRACTION * limits.vMax * axis(held, FORWARD, BACK),
    w: KEY_FRACTION * limits.wMax * axis(held, LEFT, RIGHT),
  };
}
