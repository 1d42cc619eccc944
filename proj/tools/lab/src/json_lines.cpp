#include "nnlms/lab/json_lines.hpp"

#include <algorithm>
#include <string>

namespace nnlms::lab {

namespace {

class Scanner {
public:
    Scanner(std::string_view text, std::map<std::string, int, std::less<>>& out)
        : text_(text), out_(out) {}

    void run() {
        skip_ws();
        out_.emplace("", line_);
        value("");
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void advance() {
        if (peek() == '\n') {
            ++line_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n')) {
            advance();
        }
    }

    std::string string_token() {
        std::string s;
        advance(); // opening quote
        while (pos_ < text_.size() && peek() != '"') {
            if (peek() == '\\') {
                advance();
            }
            s.push_back(peek());
            advance();
        }
        advance(); // closing quote
        return s;
    }

    void value(const std::string& path) {
        skip_ws();
        switch (peek()) {
        case '{':
            object(path);
            break;
        case '[':
            array(path);
            break;
        case '"':
            string_token();
            break;
        default:
            while (pos_ < text_.size() && std::string_view(",]} \t\r\n").find(peek()) ==
                                              std::string_view::npos) {
                advance();
            }
        }
    }

    void object(const std::string& path) {
        advance();
        skip_ws();
        while (pos_ < text_.size() && peek() != '}') {
            const int key_line = line_;
            const std::string child = path + "/" + string_token();
            out_.emplace(child, key_line);
            skip_ws();
            advance(); // ':'
            value(child);
            skip_ws();
            if (peek() == ',') {
                advance();
                skip_ws();
            }
        }
        advance();
    }

    void array(const std::string& path) {
        advance();
        skip_ws();
        for (std::size_t i = 0; pos_ < text_.size() && peek() != ']'; ++i) {
            const std::string child = path + "/" + std::to_string(i);
            out_.emplace(child, line_);
            value(child);
            skip_ws();
            if (peek() == ',') {
                advance();
                skip_ws();
            }
        }
        advance();
    }

    std::string_view text_;
    std::map<std::string, int, std::less<>>& out_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

} // namespace

JsonLineIndex::JsonLineIndex(std::string_view text) {
    Scanner(text, lines_).run();
}

int JsonLineIndex::line_of(std::string_view pointer) const {
    std::string p(pointer);
    for (;;) {
        if (auto it = lines_.find(p); it != lines_.end()) {
            return it->second;
        }
        if (p.empty()) {
            return 1;
        }
        p.erase(p.rfind('/'));
    }
}

int line_at_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

} // namespace nnlms::lab
