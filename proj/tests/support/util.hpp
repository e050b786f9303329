#pragma once

#include <lpmln/textio.hpp>

#include <fstream>
#include <sstream>
#include <string>

#ifndef LPMLN_CORPUS_DIR
#define LPMLN_CORPUS_DIR "corpus"
#endif

namespace testutil {
inline std::string corpus_path(const std::string& name) { return std::string(LPMLN_CORPUS_DIR) + "/" + name; }

inline std::string read_corpus(const std::string& name) {
    std::ifstream in(corpus_path(name));
    if (!in) { throw std::runtime_error("missing corpus file " + name); }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class T>
T load(lpmln::Dialect d, const std::string& name) {
    return std::get<T>(lpmln::parse(d, read_corpus(name), name));
}

inline lpmln::GroundProgram ground_corpus(const std::string& name) {
    return lpmln::ground_program(lpmln::parse_lpmln(read_corpus(name), name));
}

inline lpmln::AtomId id(const lpmln::AtomTable& t, const std::string& name) {
    for (lpmln::AtomId a = 0; a != t.size(); ++a) {
        if (t.name(a) == name) { return a; }
    }
    throw std::runtime_error("no atom " + name);
}

inline lpmln::Interpretation interp(const lpmln::AtomTable& t, const std::vector<std::string>& names) {
    lpmln::Interpretation I(t.size());
    for (const auto& n : names) { I.insert(id(t, n)); }
    return I;
}
} // namespace testutil
