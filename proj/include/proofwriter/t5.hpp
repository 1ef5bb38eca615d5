#ifndef PROOFWRITER_T5_HPP
#define PROOFWRITER_T5_HPP

#include <optional>
#include <stdexcept>
#include <string>

// The plain-text I/O templates the tasks are trained and evaluated with.
// Inputs:
//   qa/iterative/enumeration: "$answer$ ; $proof$ ; $question$ = Q ; $context$ = C"
//   abduction:                "$answer$ ; $question$ = Q ; $context$ = C"
// Outputs:
//   "$answer$ = A"  or  "$answer$ = A ; $proof$ = P"

namespace proofwriter {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TaskKind { Qa, IterativeStep, Enumeration, Abduction };

inline std::string to_string(TaskKind t) {
    switch (t) {
    case TaskKind::Qa: return "qa";
    case TaskKind::IterativeStep: return "iterative-step";
    case TaskKind::Enumeration: return "enumeration";
    case TaskKind::Abduction: return "abduction";
    }
    return "";
}

inline std::optional<TaskKind> task_from_string(const std::string& s) {
    if (s == "qa") return TaskKind::Qa;
    if (s == "iterative-step" || s == "iterative") return TaskKind::IterativeStep;
    if (s == "enumeration") return TaskKind::Enumeration;
    if (s == "abduction") return TaskKind::Abduction;
    return std::nullopt;
}

inline constexpr const char* kIterativeQuestion = "What is one single-hop inference?";
inline constexpr const char* kEnumerationQuestion = "What are all the inferences?";

struct T5Input {
    TaskKind task = TaskKind::Qa;
    std::string question;
    std::string context;
};

struct T5Output {
    std::string answer;
    std::optional<std::string> proof;
};

inline std::string format_t5_input(const T5Input& in) {
    std::string head =
        in.task == TaskKind::Abduction ? "$answer$ ; $question$ = " : "$answer$ ; $proof$ ; $question$ = ";
    return head + in.question + " ; $context$ = " + in.context;
}

inline std::string format_t5_output(const T5Output& out) {
    std::string s = "$answer$ = " + out.answer;
    if (out.proof) s += " ; $proof$ = " + *out.proof;
    return s;
}

inline T5Input import_t5_input(const std::string& s) {
    static const std::string kQaHead = "$answer$ ; $proof$ ; $question$ = ";
    static const std::string kAbHead = "$answer$ ; $question$ = ";
    static const std::string kCtx = " ; $context$ = ";

    T5Input in;
    std::string rest;
    if (s.rfind(kQaHead, 0) == 0) {
        rest = s.substr(kQaHead.size());
    } else if (s.rfind(kAbHead, 0) == 0) {
        in.task = TaskKind::Abduction;
        rest = s.substr(kAbHead.size());
    } else {
        throw FormatError("input does not start with a recognized '$answer$ ...' template");
    }
    size_t ctx = rest.find(kCtx);
    if (ctx == std::string::npos)
        throw FormatError("input is missing the ' ; $context$ = ' section");
    in.question = rest.substr(0, ctx);
    in.context = rest.substr(ctx + kCtx.size());
    if (in.task != TaskKind::Abduction) {
        if (in.question == kIterativeQuestion)
            in.task = TaskKind::IterativeStep;
        else if (in.question == kEnumerationQuestion)
            in.task = TaskKind::Enumeration;
    }
    return in;
}

inline T5Output import_t5_output(const std::string& s) {
    static const std::string kHead = "$answer$ = ";
    static const std::string kProof = " ; $proof$ = ";
    if (s.rfind(kHead, 0) != 0)
        throw FormatError("output does not start with '$answer$ = '");
    std::string rest = s.substr(kHead.size());
    T5Output out;
    size_t p = rest.find(kProof);
    if (p == std::string::npos) {
        out.answer = rest;
    } else {
        out.answer = rest.substr(0, p);
        out.proof = rest.substr(p + kProof.size());
    }
    return out;
}

} // namespace proofwriter

#endif
