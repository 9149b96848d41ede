#include "exeos/llm/gateway.hpp"

namespace exeos::llm {

std::string_view to_string(Target t) {
  return t == Target::Ampl ? "ampl" : "external-runtime";
}

namespace {

void append_few_shots(std::string& out, const std::vector<FewShot>& shots) {
  for (const auto& shot : shots) {
    out += "EXAMPLE INPUT:\n";
    out += shot.problem;
    out += "\nEXAMPLE RESPONSE:\n";
    out += shot.answer;
    out += "\n\n";
  }
}

std::string render_context(const Gateway::GenContext& context) {
  if (const auto* sp = std::get_if<StructuredProblem>(&context))
    return render_structured(*sp);
  return std::get<std::string>(context);
}

std::string target_instructions(Target target) {
  if (target == Target::Ampl) {
    return
        "Write an algebraic specification for the problem in the AMPL subset "
        "below.\n"
        "Allowed declarations: `set`, `param` (with optional {SET} or "
        "{SET, SET} indexing and `>= n` / `<= n` bounds), `var` (optional "
        "{SET} indexing, bounds, `integer` or `binary`), `subject to` "
        "constraints, and `maximize` / `minimize` objectives.\n"
        "Allowed expressions: numbers, references like `price[p]`, `+`, `-`, "
        "`*`, parentheses, and `sum {i in SET} term`. Relations are `<=`, "
        "`=`, `>=`.\n"
        "Declare every set and parameter the data file provides, and nothing "
        "else. Do not include a data section.\n"
        "Return the model inside a fenced code block.\n";
  }
  return
      "Write a complete program for the external runtime that solves the "
      "problem.\n"
      "The program will be invoked with two arguments: the path of a "
      "keyed-document data file (JSON with `sets` and `params` objects) and "
      "an output path. It must write to the output path a `result` document "
      "with lines `status: solved|infeasible|unbounded|error` and, when "
      "solved, `objective: <number>`.\n"
      "Return the program inside a fenced code block.\n";
}

}  // namespace

std::string build_structure_prompt(const std::string& description,
                                   const std::vector<FewShot>& few_shots) {
  std::string out =
      "You organize optimization problem descriptions into a structured "
      "format.\n"
      "An optimization problem has four components: objectives, constraints, "
      "parameters, and decision variables.\n"
      "Identify all four, give each parameter and variable a symbolic name, "
      "a brief description, and its dimension (scalar, one-dimensional, or "
      "two-dimensional), and rewrite the description so every parameter "
      "mention becomes \\param{Name} and every variable mention becomes "
      "\\var{Name}.\n"
      "Respond with exactly these blocks, in this order, and nothing else:\n"
      "OBJECTIVES:\n"
      "PARAMETERS:\n"
      "VARIABLES:\n"
      "CONSTRAINTS:\n"
      "REWRITTEN:\n"
      "Inside PARAMETERS: and VARIABLES:, write one symbol per line as "
      "`name | dimension | description`.\n\n";
  append_few_shots(out, few_shots);
  out += "PROBLEM:\n";
  out += description;
  out += '\n';
  return out;
}

std::string build_generation_prompt(const Gateway::GenContext& context,
                                    Target target,
                                    const std::vector<FewShot>& few_shots) {
  std::string out = target_instructions(target);
  out += '\n';
  append_few_shots(out, few_shots);
  out += "PROBLEM:\n";
  out += render_context(context);
  out += '\n';
  return out;
}

std::string build_refinement_prompt(const std::string& prev_spec,
                                    const std::string& feedback,
                                    const Gateway::GenContext& context,
                                    Target target,
                                    const std::vector<FewShot>& few_shots) {
  std::string out = build_generation_prompt(context, target, few_shots);
  out +=
      "\nThe previous attempt failed. Analyze the errors, identify the "
      "problematic parts, and generate a corrected specification.\n"
      "PREVIOUS SPECIFICATION:\n";
  out += prev_spec;
  out += "\nSOLVER FEEDBACK:\n";
  out += feedback;
  out += '\n';
  return out;
}

}  // namespace exeos::llm
