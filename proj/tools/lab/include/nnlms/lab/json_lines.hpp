#ifndef NNLMS_LAB_JSON_LINES_HPP
#define NNLMS_LAB_JSON_LINES_HPP

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

namespace nnlms::lab {

/// Maps JSON pointers ("/algorithms/2/gamma") to the 1-based source line of
/// the member key, or of the value for array elements and the root. Built
/// from text that has already parsed successfully.
class JsonLineIndex {
public:
    explicit JsonLineIndex(std::string_view text);

    /// Line of `pointer`, falling back to the nearest recorded ancestor.
    int line_of(std::string_view pointer) const;

private:
    std::map<std::string, int, std::less<>> lines_;
};

/// 1-based line containing byte `offset` of `text`.
int line_at_offset(std::string_view text, std::size_t offset);

} // namespace nnlms::lab

#endif // NNLMS_LAB_JSON_LINES_HPP
