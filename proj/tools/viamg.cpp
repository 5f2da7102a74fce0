#include <cstdio>

int main() {
    std::puts("viamg: subcommands wired up later in the build");
    return 0;
}
