#include "decomp/config.hpp"

#include <fstream>
#include <sstream>

namespace decomp::cli {

namespace {

std::string trim(const std::string& text) {
    size_t begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    size_t end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (c == ',') {
            out.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    out.push_back(trim(current));
    return out;
}

}  // namespace

void Config::validate() const {
    double total = 0;
    for (double w : weights.w) {
        if (w < 0) throw ConfigError("weights must be nonnegative");
        total += w;
    }
    if (total == 0) throw ConfigError("at least one weight must be positive");
    if (param_threshold < 1) throw ConfigError("param_threshold must be >= 1");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    for (const auto& f : formats) {
        if (f != "json" && f != "dot" && f != "md") {
            throw ConfigError("unknown format '" + f + "'");
        }
    }
}

Config parse_config_text(const std::string& text) {
    Config config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        try {
            if (key == "weights") {
                auto parts = split_list(value);
                if (parts.size() != 4) throw ConfigError("weights needs 4 values");
                for (size_t i = 0; i < 4; ++i) config.weights.w[i] = std::stod(parts[i]);
            } else if (key == "param_threshold") {
                config.param_threshold = std::stoi(value);
            } else if (key == "palette") {
                config.palette = split_list(value);
            } else if (key == "out_dir") {
                config.out_dir = value;
            } else if (key == "format") {
                config.formats.clear();
                for (const auto& f : split_list(value)) config.formats.insert(f);
            } else if (key == "frames") {
                config.frames = value == "1" || value == "true";
            } else if (key == "jobs") {
                config.jobs = std::stoi(value);
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config line " + std::to_string(line_no) + ": bad value for '" + key +
                              "'");
        }
    }
    config.validate();
    return config;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

}  // namespace decomp::cli
