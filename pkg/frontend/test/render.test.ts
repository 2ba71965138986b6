import { describe, expect, it } from "vitest";
import { fitViewport, renderGauge, scanPoints, worldToScreen } from "../src/render.js";

describe("viewport", () => {
  it("fits the room with the margin on the tight axis", () => {
    const vp = fitViewport(17, 8, 900, 480, 16);
    expect(vp.scale).toBeCloseTo((900 - 32) / 17, 9);
    expect(vp.offX).toBeCloseTo(16, 9);
    // the loose axis gets centered
    expect(vp.offY).toBeCloseTo((480 - 8 * vp.scale) / 2, 9);
  });

  it("maps world axes with y up on screen", () => {
    const vp = fitViewport(10, 10, 200, 200, 0);
    const [x0, y0] = worldToScreen(vp, 0, 0);
    const [x1, y1] = worldToScreen(vp, 10, 10);
    expect(x0).toBeCloseTo(0, 9);
    expect(y0).toBeCloseTo(200, 9);
    expect(x1).toBeCloseTo(200, 9);
    expect(y1).toBeCloseTo(0, 9);
    const [mx, my] = worldToScreen(vp, 5, 5);
    expect(mx).toBeCloseTo(100, 9);
    expect(my).toBeCloseTo(100, 9);
  });
});

describe("scanPoints", () => {
  it("projects ranges along the robot-relative bearings", () => {
    const pose = { x: 1, y: 1, th: 0 };
    const pts = scanPoints(pose, [2, 5, 1], -Math.PI / 2, Math.PI / 2, 5);
    // the middle ray is at max range and carries no return
    expect(pts).toHaveLength(2);
    expect(pts[0][0]).toBeCloseTo(1, 9);
    expect(pts[0][1]).toBeCloseTo(-1, 9);
    expect(pts[1][0]).toBeCloseTo(1, 9);
    expect(pts[1][1]).toBeCloseTo(2, 9);
  });

  it("rotates with the robot heading", () => {
    const pts = scanPoints({ x: 0, y: 0, th: Math.PI / 2 }, [3], 0, 1, 5);
    expect(pts[0][0]).toBeCloseTo(0, 9);
    expect(pts[0][1]).toBeCloseTo(3, 9);
  });
});

describe("renderGauge", () => {
  function fakeBar(): { el: HTMLElement; state: { width: string; hot: boolean } } {
    const state = { width: "", hot: false };
    const el = {
      style: {
        set width(v: string) { state.width = v; },
        get width() { return state.width; },
      },
      classList: {
        toggle(name: string, on: boolean) {
          if (name === "hot") state.hot = on;
        },
      },
    } as unknown as HTMLElement;
    return { el, state };
  }

  it("fills proportionally below the threshold", () => {
    const { el, state } = fakeBar();
    renderGauge(el, 0.5, 2.0);
    expect(state.width).toBe("25.0%");
    expect(state.hot).toBe(false);
  });

  it("pins at full and goes hot at and above the threshold", () => {
    const { el, state } = fakeBar();
    renderGauge(el, 2.0, 2.0);
    expect(state.width).toBe("100.0%");
    expect(state.hot).toBe(true);
    renderGauge(el, 5.0, 2.0);
    expect(state.width).toBe("100.0%");
    expect(state.hot).toBe(true);
  });

  it("stays quiet with no threshold yet", () => {
    const { el, state } = fakeBar();
    renderGauge(el, 3.0, 0);
    expect(state.width).toBe("0.0%");
    expect(state.hot).toBe(false);
  });
});
