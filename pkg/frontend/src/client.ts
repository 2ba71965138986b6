/** WebSocket plumbing between a ConsoleSession and the bridge. Pure message
 * transport; all protocol decisions live in the session. */

import { encode } from "./protocol.js";
import { ConsoleSession, PUMP_PERIOD_MS } from "./session.js";

export interface ClientHandle {
  close(): void;
}

/** Connect a session to a bridge URL. Pumps the session every half send
 * period so key transitions go out promptly and the steady cadence holds. */
export function connectSession(
  url: string, session: ConsoleSession, onChange?: () => void,
): ClientHandle {
  const sock = new WebSocket(url);
  let timer: ReturnType<typeof setInterval> | null = null;

  const pump = () => {
    for (const msg of session.pump(Date.now())) {
      if (sock.readyState === WebSocket.OPEN) sock.send(encode(msg));
    }
  };

  sock.onmessage = (ev) => {
    session.handleMessage(String(ev.data), Date.now());
    onChange?.();
  };
  sock.onopen = () => {
    timer = setInterval(pump, PUMP_PERIOD_MS);
    onChange?.();
  };
  sock.onclose = () => {
    if (timer !== null) clearInterval(timer);
    timer = null;
    session.handleDisconnect("connection closed");
    onChange?.();
  };
  sock.onerror = () => {
    // onclose follows and carries the user-facing state change
  };

  return {
    close() {
      if (timer !== null) clearInterval(timer);
      timer = null;
      sock.close();
    },
  };
}
