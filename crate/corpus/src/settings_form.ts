// Validation for a user settings form.
type Field = "email" | "name" | "age" | "timezone";

interface Problem {
  field: Field;
  message: string;
}

const ZONES = ["UTC", "Europe/Berlin", "America/Chicago", "Asia/Tokyo"];

function trimmed(value: string | undefined): string {
  if (value === undefined) {
    return "";
  }
  return value.trim();
}

export function validate(input: Record<string, string>): Problem[] {
  const problems: Problem[] = [];
  const email = trimmed(input.email);
  if (email.length === 0) {
    problems.push({ field: "email", message: "required" });
  } else if (!email.includes("@")) {
    problems.push({ field: "email", message: "missing @" });
  }

  const name = trimmed(input.name);
  if (name.length > 64) {
    problems.push({ field: "name", message: "too long" });
  }

  const age = Number(input.age);
  if (input.age !== undefined) {
    if (Number.isNaN(age)) {
      problems.push({ field: "age", message: "not a number" });
    } else if (age < 13 || age > 130) {
      problems.push({ field: "age", message: "out of range" });
    }
  }

  const zone = trimmed(input.timezone);
  if (zone !== "" && ZONES.indexOf(zone) < 0) {
    problems.push({ field: "timezone", message: `unknown zone ${zone}` });
  }
  return problems;
}

export function summary(problems: Problem[]): string {
  if (problems.length === 0) {
    return "ok";
  }
  const lines: string[] = [];
  for (const p of problems) {
    switch (p.field) {
      case "email":
        lines.push(`Email: ${p.message}`);
        break;
      case "age":
        lines.push(`Age: ${p.message}`);
        break;
      default:
        lines.push(`${p.field}: ${p.message}`);
    }
  }
  return lines.join("\n");
}

export function firstProblem(problems: Problem[], field: Field): string | null {
  for (let i = 0; i < problems.length; i++) {
    if (problems[i].field === field) {
      return problems[i].message;
    }
  }
  return null;
}
