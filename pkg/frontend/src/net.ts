import type { ClientMsg, ServerMsg } from "./protocol";
import { parseServerMsg } from "./protocol";

export type Connection = {
  send: (msg: ClientMsg) => void;
  close: () => void;
};

// One websocket, JSON frames. Sends issued before the socket opens are
// queued so a session can greet immediately after connect().
export function connect(
  url: string,
  onMessage: (msg: ServerMsg) => void,
  onClose: (closedByUs: boolean) => void,
): Connection {
  const ws = new WebSocket(url);
  const queue: string[] = [];
  let closedByUs = false;

  ws.onopen = () => {
    for (const text of queue) ws.send(text);
    queue.length = 0;
  };
  ws.onmessage = (ev) => {
    const msg = parseServerMsg(String(ev.data));
    if (msg) onMessage(msg);
    else console.warn("dropping unparseable frame", ev.data);
  };
  ws.onclose = () => onClose(closedByUs);

  return {
    send: (msg) => {
      const text = JSON.stringify(msg);
      if (ws.readyState === WebSocket.OPEN) ws.send(text);
      else if (ws.readyState === WebSocket.CONNECTING) queue.push(text);
      // closed or closing: drop silently, onClose already fired or will
    },
    close: () => {
      closedByUs = true;
      ws.close();
    },
  };
}
