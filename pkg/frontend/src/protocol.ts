/** Addresses and frame shapes shared with the engine's control protocol. */

export interface OscFrame {
  address: string;
  args: (number | string)[];
}

export const CONNECT_ADDRESS = "/ViolinControl/Connect";
export const DISCONNECT_ADDRESS = "/ViolinControl/Disconnect";
export const ERROR_ADDRESS = "/ViolinControl/Error";
export const MAP_ADDRESS = "/ViolinControl/Map";
export const PARAMS_ADDRESS = "/ViolinControl/Params";
export const PARAM_PREFIX = "/ViolinControl/Param/";
export const INPUT_PREFIX = "/ViolinControl/Input/";

export const PARAM_NAMES = [
  "Amplitude", "Pitch", "Centroid",
  "X", "Y", "Z", "Yaw", "Pitch2", "Roll",
  "BowX", "BowY", "BowZ", "BowYaw", "BowPitch", "BowRoll",
] as const;

/** Subscribe/unsubscribe request: the single arg must be a wire integer. */
export function subscribeFrame(address: string, intervalMs: number): OscFrame {
  return { address, args: [Math.round(intervalMs)] };
}

/**
 * Whole-pose injection frame: violin (x, y, altitude, yaw=0, pitch=0, roll=0)
 * followed by a zeroed bow pose.  The pad only steers position and altitude.
 */
export function poseFrame(x: number, y: number, altitude: number): OscFrame {
  return {
    address: INPUT_PREFIX + "Pose",
    args: [x, y, altitude, 0, 0, 0, 0, 0, 0, 0, 0, 0],
  };
}
