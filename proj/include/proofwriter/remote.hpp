#ifndef PROOFWRITER_REMOTE_HPP
#define PROOFWRITER_REMOTE_HPP

#include <memory>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "proofwriter/generator.hpp"

// Remote one-step backend speaking the wire protocol:
//   POST <endpoint>  {"input": "<t5 input string>"}
//   200              {"output": "<t5 output string>"}
// Endpoint comes from --generator-url or PROOFWRITER_GENERATOR_URL.

namespace proofwriter {

struct RemoteConfig {
    std::string url;        // e.g. "http://127.0.0.1:8791/generate"
    int timeout_seconds = 30;
    int retries = 2;
};

namespace detail {

struct SplitUrl {
    std::string host_port; // "http://127.0.0.1:8791"
    std::string path;      // "/generate"
};

inline SplitUrl split_url(const std::string& url) {
    size_t scheme = url.find("://");
    if (scheme == std::string::npos)
        throw GeneratorError("generator url must include a scheme: " + url);
    size_t path_start = url.find('/', scheme + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

} // namespace detail

class RemoteBackend : public OneStepBackend {
public:
    RemoteBackend(RemoteConfig cfg, SemanticsMode mode, GrammarProfile profile)
        : cfg_(std::move(cfg)), mode_(mode), profile_(std::move(profile)) {}

    OneStepResponse next(const OneStepRequest& req) override {
        nlohmann::json payload = {{"input", req.to_t5()}};
        std::string body = payload.dump();

        detail::SplitUrl parts = detail::split_url(cfg_.url);
        std::string reply;
        bool got = false;
        for (int attempt = 0; attempt <= cfg_.retries && !got; ++attempt) {
            httplib::Client client(parts.host_port);
            client.set_connection_timeout(cfg_.timeout_seconds);
            client.set_read_timeout(cfg_.timeout_seconds);
            auto res = client.Post(parts.path, body, "application/json");
            if (res && res->status == 200) {
                reply = res->body;
                got = true;
            }
        }
        if (!got)
            throw RemoteUnavailableError("generator endpoint unreachable: " + cfg_.url);

        std::string output;
        try {
            nlohmann::json parsed = nlohmann::json::parse(reply);
            output = parsed.at("output").get<std::string>();
        } catch (const std::exception& e) {
            throw MalformedResponseError(std::string("bad wire payload: ") + e.what());
        }

        T5Output t5;
        try {
            t5 = import_t5_output(output);
        } catch (const FormatError& e) {
            throw MalformedResponseError(std::string("bad output string: ") + e.what());
        }
        OneStepResponse resp{t5.answer, t5.proof.value_or("None")};
        validate(req, resp);
        return resp;
    }

    std::string name() const override { return "remote(" + cfg_.url + ")"; }

private:
    // Shape checks: the answer must be a sentence or "None"; the proof must
    // be a single rule application over ids present in the request context.
    void validate(const OneStepRequest& req, const OneStepResponse& resp) const {
        if (resp.is_none()) return;
        Theory t = parse_context(req.context, mode_, profile_);
        Literal lit;
        try {
            TheorySentence s = parse_sentence(resp.answer, profile_);
            const Fact* f = std::get_if<Fact>(&s);
            if (!f) throw MalformedResponseError("remote implication is not a fact sentence");
            lit = f->literal;
        } catch (const ParseError& e) {
            throw MalformedResponseError(std::string("unparseable remote implication: ") +
                                         e.what());
        }
        try {
            decode_step_proof(resp.proof, lit, t, profile_);
        } catch (const UnknownSentenceIdError& e) {
            throw UnknownIdInProofError(e.what());
        } catch (const MalformedProofError& e) {
            throw MalformedResponseError(std::string("remote proof is not 1-step: ") + e.what());
        }
    }

    RemoteConfig cfg_;
    SemanticsMode mode_;
    GrammarProfile profile_;
};

} // namespace proofwriter

#endif
