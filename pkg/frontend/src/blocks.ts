// The block workspace model: a single linear chain of instruction blocks
// under the Start block. Argument dropdowns only offer type-compatible
// objects and preselect the first one, so the chain always encodes a
// complete plan.

import type { ObjectInfo, SchemaInfo, StepPayload } from "./api.js";

export interface BlockModel {
  id: number;
  schema: string;
  args: string[];
  minimized: boolean;
}

export function compatibleObjects(objects: ObjectInfo[], paramType: string): ObjectInfo[] {
  return objects.filter((o) => paramType === "object" || o.type === paramType);
}

export class BlockChain {
  blocks: BlockModel[] = [];
  private nextId = 1;

  constructor(
    readonly schemas: SchemaInfo[],
    readonly objects: ObjectInfo[],
  ) {}

  schema(name: string): SchemaInfo {
    const schema = this.schemas.find((s) => s.name === name);
    if (!schema) throw new Error(`unknown schema ${name}`);
    return schema;
  }

  optionsFor(schemaName: string, paramIndex: number): ObjectInfo[] {
    return compatibleObjects(this.objects, this.schema(schemaName).params[paramIndex].type);
  }

  add(schemaName: string): BlockModel {
    const schema = this.schema(schemaName);
    const args = schema.params.map((p, i) => {
      const options = compatibleObjects(this.objects, p.type);
      if (options.length === 0) throw new Error(`no objects of type ${p.type}`);
      return options[0].name;
    });
    const block: BlockModel = { id: this.nextId++, schema: schemaName, args, minimized: false };
    this.blocks.push(block);
    return block;
  }

  get(id: number): BlockModel | undefined {
    return this.blocks.find((b) => b.id === id);
  }

  remove(id: number): void {
    this.blocks = this.blocks.filter((b) => b.id !== id);
  }

  move(id: number, toIndex: number): void {
    const from = this.blocks.findIndex((b) => b.id === id);
    if (from < 0) return;
    const clamped = Math.max(0, Math.min(this.blocks.length - 1, toIndex));
    const [block] = this.blocks.splice(from, 1);
    this.blocks.splice(clamped, 0, block);
  }

  setArg(id: number, paramIndex: number, value: string): void {
    const block = this.get(id);
    if (!block) return;
    block.args[paramIndex] = value;
  }

  toggleMinimized(id: number): void {
    const block = this.get(id);
    if (block) block.minimized = !block.minimized;
  }

  toPlan(): StepPayload[] {
    return this.blocks.map((b) => ({ name: b.schema, args: [...b.args] }));
  }
}
