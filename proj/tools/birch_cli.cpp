#include <cstdio>

int main() {
    std::puts("birch: command line under construction");
    return 2;
}
