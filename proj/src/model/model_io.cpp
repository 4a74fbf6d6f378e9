#include "hopfsplit/model/model_io.hpp"

#include <fstream>
#include <sstream>

namespace hopfsplit {

namespace {

int parse_exponent(const std::string& tok, const std::string& name, int line) {
    if (tok == name) return 1;
    std::string pre = name + "^";
    if (tok.rfind(pre, 0) != 0)
        throw ConfigError("model config line " + std::to_string(line) + ": bad factor '" + tok + "'");
    try {
        return std::stoi(tok.substr(pre.size()));
    } catch (...) {
        throw ConfigError("model config line " + std::to_string(line) + ": bad exponent in '" + tok + "'");
    }
}

} // namespace

RawModel parse_model(std::istream& in) {
    RawModel m;
    m.terms.clear();
    std::string line;
    int lineno = 0;
    bool saw_a = false, saw_b = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;

        if (key == "a" || key == "b" || key == "sigma" || key == "degree" ||
            key == "delta_margin") {
            std::string val;
            if (!(ls >> val))
                throw ConfigError("model config line " + std::to_string(lineno) + ": missing value");
            if (key == "a") { m.a = val; saw_a = true; }
            else if (key == "b") { m.b = val; saw_b = true; }
            else if (key == "sigma") m.sigma = val;
            else if (key == "degree") m.degree = std::stoi(val);
            else m.delta_margin = std::stod(val);
            std::string extra;
            if (ls >> extra)
                throw ConfigError("model config line " + std::to_string(lineno) + ": trailing '" + extra + "'");
        } else if (key == "F:" || key == "G:" || key == "H:") {
            RawTerm t;
            t.target = key[0];
            t.line = lineno;
            if (!(ls >> t.coeff))
                throw ConfigError("model config line " + std::to_string(lineno) + ": missing coefficient");
            std::string tok;
            while (ls >> tok) {
                if (tok[0] == 'x') t.i = parse_exponent(tok, "x", lineno);
                else if (tok[0] == 'y') t.j = parse_exponent(tok, "y", lineno);
                else if (tok[0] == 'z') t.k = parse_exponent(tok, "z", lineno);
                else if (tok[0] == 'e') t.l = parse_exponent(tok, "eps", lineno);
                else
                    throw ConfigError("model config line " + std::to_string(lineno) + ": unknown factor '" +
                                      tok + "'");
            }
            if (t.i + t.j + t.k + t.l < 3)
                throw ConfigError("model config line " + std::to_string(lineno) + ": term has degree " +
                                  std::to_string(t.i + t.j + t.k + t.l) + " < 3");
            m.terms.push_back(t);
        } else {
            throw ConfigError("model config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    (void)saw_a;
    (void)saw_b;
    return m;
}

RawModel parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file: " + path);
    return parse_model(in);
}

std::string format_model(const RawModel& raw) {
    std::ostringstream os;
    os << "a " << raw.a << "\n";
    os << "b " << raw.b << "\n";
    os << "sigma " << raw.sigma << "\n";
    os << "degree " << raw.degree << "\n";
    os << "delta_margin " << raw.delta_margin << "\n";
    for (const auto& t : raw.terms) {
        os << t.target << ": " << t.coeff;
        if (t.i) os << " x^" << t.i;
        if (t.j) os << " y^" << t.j;
        if (t.k) os << " z^" << t.k;
        if (t.l) os << " eps^" << t.l;
        os << "\n";
    }
    return os.str();
}

} // namespace hopfsplit
