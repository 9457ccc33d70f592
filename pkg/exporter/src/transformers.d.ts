// Minimal typing for the optional encoder backend so the package compiles
// without it installed.
declare module "@xenova/transformers" {
  export function pipeline(task: string, model?: string): Promise<any>;
}
