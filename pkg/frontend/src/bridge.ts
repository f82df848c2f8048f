/**
 * Client for the engine's JSON bridge: one control frame per WebSocket
 * message, {"address": ..., "args": [...]}.  Transport is injected so the
 * client runs identically against a real socket or a test stub.
 */

import {
  CONNECT_ADDRESS,
  DISCONNECT_ADDRESS,
  ERROR_ADDRESS,
  MAP_ADDRESS,
  OscFrame,
  PARAM_PREFIX,
  PARAMS_ADDRESS,
  poseFrame,
  subscribeFrame,
} from "./protocol.js";
import { Mesh, parseMesh } from "./mesh.js";

export interface BridgeSocket {
  send(data: string): void;
  close(): void;
}

export type ReportHandler = (address: string, args: number[]) => void;

export class BridgeClient {
  onReport: ReportHandler | null = null;
  onMesh: ((mesh: Mesh) => void) | null = null;
  onError: ((detail: string) => void) | null = null;

  constructor(private readonly socket: BridgeSocket) {}

  connect(): void {
    this.sendFrame({ address: CONNECT_ADDRESS, args: [] });
  }

  disconnect(): void {
    this.sendFrame({ address: DISCONNECT_ADDRESS, args: [] });
    this.socket.close();
  }

  /** Subscribe a named parameter; intervalMs 0 reports every engine tick. */
  subscribe(name: string, intervalMs: number): void {
    this.sendFrame(subscribeFrame(PARAM_PREFIX + name, intervalMs));
  }

  unsubscribe(name: string): void {
    this.sendFrame(subscribeFrame(PARAM_PREFIX + name, -1));
  }

  /** Subscribe the whole active parameter vector. */
  subscribeParams(intervalMs: number): void {
    this.sendFrame(subscribeFrame(PARAMS_ADDRESS, intervalMs));
  }

  requestMap(): void {
    this.sendFrame({ address: MAP_ADDRESS, args: [] });
  }

  sendPose(x: number, y: number, altitude: number): void {
    this.sendFrame(poseFrame(x, y, altitude));
  }

  sendFrame(frame: OscFrame): void {
    this.socket.send(JSON.stringify(frame));
  }

  /** Feed one raw frame from the transport. */
  receive(data: string): void {
    let obj: unknown;
    try {
      obj = JSON.parse(data);
    } catch {
      this.onError?.(`unparseable frame: ${data.slice(0, 120)}`);
      return;
    }
    const frame = obj as Record<string, unknown>;
    const address = frame["address"];
    const args = frame["args"];
    if (typeof address !== "string" || !Array.isArray(args)) {
      this.onError?.("frame needs an address string and args list");
      return;
    }
    if (address === ERROR_ADDRESS) {
      this.onError?.(args.length ? String(args[0]) : "unknown error");
      return;
    }
    if (address === MAP_ADDRESS) {
      if (typeof args[0] !== "string") {
        this.onError?.("map reply carried no JSON string");
        return;
      }
      try {
        this.onMesh?.(parseMesh(args[0]));
      } catch (exc) {
        this.onError?.(String(exc));
      }
      return;
    }
    const values = args.filter((a): a is number => typeof a === "number");
    this.onReport?.(address, values);
  }
}
