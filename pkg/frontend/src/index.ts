export * from "./types";
export * from "./labels";
export * from "./validation";
export * from "./phase1Form";
export * from "./phase2Form";
export * from "./dashboard";
export * from "./api";
export * from "./fuzz";
